"""Synchronous growth dynamics.

:func:`step` is the fast path: it keeps per-cell arm counts between calls
and after the first step only re-tests cells on the arms of the sites added
by the previous step.  :func:`step_naive` recomputes every window from
scratch and serves as the reference.

The compiled kernel (``ydgrow._kernel``) is used when importable; set
``YDGROW_BACKEND=python`` to force the numpy fallback.
"""

from __future__ import annotations

import enum
import os
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import _fallback
from .grid import NEVER, Boundary, Configuration
from .zeroset import INF, Rule, ZeroSetError

__all__ = [
    "BACKEND",
    "get_backend",
    "StopReason",
    "StopCondition",
    "Outcome",
    "NotRectangular",
    "step",
    "step_naive",
    "step_scan",
    "growth_mask",
    "run",
    "run_to_fixation",
    "is_inert",
    "saturated_line_step",
    "saturated_closure",
]


def _load_backends():
    backends = {"python": _fallback}
    try:
        from . import _kernel
    except ImportError:
        pass
    else:
        backends["cython"] = _kernel
    return backends


_BACKENDS = _load_backends()


def get_backend(name: Optional[str] = None):
    """Return a kernel module by name; ``None`` means the default."""
    if name is None:
        name = BACKEND
    try:
        return _BACKENDS[name]
    except KeyError:
        raise ValueError(f"unknown or unavailable backend {name!r}; have {sorted(_BACKENDS)}") from None


def _default_backend() -> str:
    forced = os.environ.get("YDGROW_BACKEND", "").strip().lower()
    if forced:
        if forced not in _BACKENDS:
            raise ImportError(f"YDGROW_BACKEND={forced!r} is not available")
        return forced
    return "cython" if "cython" in _BACKENDS else "python"


BACKEND = _default_backend()


class NotRectangular(ZeroSetError):
    """Saturated-line dynamics need a rectangular (line-growth) zero-set."""


class StopReason(str, enum.Enum):
    FIXED = "fixed"
    ORIGIN_OCCUPIED = "origin_occupied"
    TIME_LIMIT = "time_limit"


@dataclass(frozen=True)
class StopCondition:
    until_fixed: bool = True
    origin: Optional[tuple] = None
    t_max: Optional[int] = None

    def __post_init__(self):
        if not self.until_fixed and self.origin is None and self.t_max is None:
            raise ValueError("stop condition never triggers")
        if self.t_max is not None and self.t_max < 0:
            raise ValueError("t_max must be nonnegative")


@dataclass(frozen=True)
class Outcome:
    stop_reason: StopReason
    stop_time: int
    newly_occupied_total: int
    final_density: float


class _State:
    """Incremental counts cached on a configuration."""

    def __init__(self, config: Configuration, rule: Rule, backend):
        config.check_torus(rule.rho)
        self.rule = rule
        self.backend = backend
        self.periodic = config.boundary is Boundary.PERIODIC
        self.grow = rule.growth_table()
        shape = (config.height, config.width)
        self.hcnt = np.zeros(shape, dtype=np.int16)
        self.vcnt = np.zeros(shape, dtype=np.int16)
        backend.build_counts(config.birth, rule.rho, self.periodic, self.hcnt, self.vcnt)
        size = config.width * config.height
        self.last = np.zeros(size, dtype=np.int32)
        self.out = np.zeros(size, dtype=np.int32)
        self.n_last = -1  # -1: next step must scan every cell
        self.version = config._version

    def valid_for(self, config: Configuration, rule: Rule, backend) -> bool:
        return self.version == config._version and self.rule == rule and self.backend is backend


def step(config: Configuration, rule: Rule, backend=None) -> int:
    """Advance one synchronous step in place; return the number of cells added."""
    backend = get_backend(backend) if backend is None or isinstance(backend, str) else backend
    state = config._engine
    if state is None or not state.valid_for(config, rule, backend):
        state = _State(config, rule, backend)
        config._engine = state
    t_new = config.time + 1
    if state.n_last < 0:
        changed = backend.step_full(
            config.birth, config.bits, state.hcnt, state.vcnt, state.grow,
            rule.rho, state.periodic, t_new, state.out,
        )
    else:
        changed = backend.step_frontier(
            config.birth, config.bits, state.hcnt, state.vcnt, state.grow,
            rule.rho, state.periodic, t_new, state.last, state.n_last, state.out,
        )
    state.last, state.out = state.out, state.last
    state.n_last = changed
    config.time = t_new
    config._version += 1
    state.version = config._version
    return int(changed)


def _shift(a: np.ndarray, d: int, axis: int, periodic: bool) -> np.ndarray:
    """``out[i] = a[i + d]`` along ``axis``; zero fill unless periodic."""
    if periodic:
        return np.roll(a, -d, axis=axis)
    out = np.zeros_like(a)
    n = a.shape[axis]
    if abs(d) >= n:
        return out
    src = [slice(None)] * a.ndim
    dst = [slice(None)] * a.ndim
    if d >= 0:
        src[axis], dst[axis] = slice(d, None), slice(0, n - d)
    else:
        src[axis], dst[axis] = slice(0, n + d), slice(-d, None)
    out[tuple(dst)] = a[tuple(src)]
    return out


def arm_counts(occ: np.ndarray, rho: int, periodic: bool):
    """Direct window sums of a boolean ``[y, x]`` array, no incremental state."""
    o = occ.astype(np.int16)
    h = np.zeros_like(o)
    v = np.zeros_like(o)
    for d in range(-rho, rho + 1):
        h += _shift(o, d, 1, periodic)
        v += _shift(o, d, 0, periodic)
    return h, v


def growth_mask(config: Configuration, rule: Rule) -> np.ndarray:
    """Empty cells that the next synchronous step would occupy."""
    config.check_torus(rule.rho)
    occ = config.birth != NEVER
    h, v = arm_counts(occ, rule.rho, config.boundary is Boundary.PERIODIC)
    return ~occ & (rule.growth_table()[h, v] != 0)


def _commit_mask(config: Configuration, mask: np.ndarray) -> int:
    config.time += 1
    config.birth[mask] = config.time
    config.sync_bits()
    return int(mask.sum())


def step_naive(config: Configuration, rule: Rule) -> int:
    """Reference step: full window scans of the pre-step configuration."""
    return _commit_mask(config, growth_mask(config, rule))


def step_scan(config: Configuration, rule: Rule, order=None) -> int:
    """Cell-by-cell reference step visiting cells in ``order``.

    ``order`` is an iterable of ``(x, y)``; every decision reads a frozen
    copy of the pre-step occupancy, so the visiting order cannot matter.
    """
    config.check_torus(rule.rho)
    rho, W, H = rule.rho, config.width, config.height
    periodic = config.boundary is Boundary.PERIODIC
    before = config.birth != NEVER
    z = rule.zero_set
    if order is None:
        order = ((x, y) for y in range(H) for x in range(W))
    mask = np.zeros_like(before)
    for x, y in order:
        if before[y, x]:
            continue
        h = v = 0
        for d in range(-rho, rho + 1):
            xx, yy = x + d, y + d
            if periodic:
                h += before[y, xx % W]
                v += before[yy % H, x]
            else:
                h += 0 <= xx < W and before[y, xx]
                v += 0 <= yy < H and before[yy, x]
        if not (v < z.height and h < z.rows[v]):
            mask[y, x] = True
    return _commit_mask(config, mask)


def run(config: Configuration, rule: Rule, stop: StopCondition = StopCondition(),
        stepper=step) -> Outcome:
    """Iterate ``stepper`` until the first satisfied stop condition.

    A fixed point is detected by a step that adds nothing; that observation
    step is counted in ``stop_time``.
    """
    added = 0
    area = config.width * config.height
    if stop.origin is not None:
        ox, oy = stop.origin
        config._check(ox, oy)
    while True:
        if stop.origin is not None and config.birth[oy, ox] != NEVER:
            reason = StopReason.ORIGIN_OCCUPIED
            break
        if stop.t_max is not None and config.time >= stop.t_max:
            reason = StopReason.TIME_LIMIT
            break
        changed = stepper(config, rule)
        added += changed
        if changed == 0:
            # a configuration that does not change never changes again
            reason = StopReason.FIXED
            break
    return Outcome(reason, config.time, added, config.count_occupied() / area)


def run_to_fixation(config: Configuration, rule: Rule, stepper=step) -> Outcome:
    return run(config, rule, StopCondition(until_fixed=True), stepper=stepper)


def is_inert(config: Configuration, rule: Rule) -> bool:
    """True when one step would add nothing (the configuration is unchanged)."""
    return not growth_mask(config, rule).any()


def _line_params(rule: Rule):
    rows = rule.zero_set.rows
    if not rows or rows[0] is INF or any(w != rows[0] for w in rows):
        raise NotRectangular(f"zero-set {rule.zero_set} is not a finite rectangle")
    return rows[0], len(rows)


def _saturated(occ: np.ndarray, need: int, window: int, periodic: bool) -> np.ndarray:
    """Rows of ``occ`` holding ``need`` occupied cells within some window."""
    n = occ.shape[1]
    if window >= n:
        return occ.sum(axis=1) >= need
    o = occ.astype(np.int32)
    if periodic:
        o = np.concatenate([o, o[:, : window - 1]], axis=1)
    c = np.concatenate([np.zeros((o.shape[0], 1), np.int32), np.cumsum(o, axis=1)], axis=1)
    sums = c[:, window:] - c[:, :-window]
    return sums.max(axis=1) >= need


def saturated_line_step(config: Configuration, rule: Rule, window: int) -> int:
    """Coarse comparison step for line growth.

    Every row with at least ``r`` occupied cells inside some interval of
    length ``window`` becomes fully occupied, and every column with at least
    ``s`` such cells likewise, both decided on the pre-step configuration.
    """
    r, s = _line_params(rule)
    if window < 2 * rule.rho + 1:
        raise ValueError(f"window must be >= 2*rho+1 = {2 * rule.rho + 1}")
    periodic = config.boundary is Boundary.PERIODIC
    occ = config.birth != NEVER
    rows = _saturated(occ, r, window, periodic)
    cols = _saturated(occ.T, s, window, periodic)
    fill = (rows[:, None] | cols[None, :]) & ~occ
    return _commit_mask(config, fill)


def saturated_closure(config: Configuration, rule: Rule, window: int) -> Configuration:
    """Iterate :func:`saturated_line_step` on a copy until nothing changes."""
    out = config.copy()
    while saturated_line_step(out, rule, window):
        pass
    return out
