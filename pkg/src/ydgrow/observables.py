"""Measured quantities: first-occupation time, spanning, critical length, density.

The plane is emulated by a zero-boundary box around the origin.  Information
moves at most ``rho`` (in l1 distance) per step, so a box of half-width
``rho * (t_max + 1)`` reproduces the origin's history on the whole lattice
exactly up to time ``t_max``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, NamedTuple, Optional, Sequence, Tuple

from .engine import StopCondition, StopReason, run, run_to_fixation, step
from .grid import Boundary, Configuration
from .parallel import parallel_map
from .rng import bernoulli_field, trial_seed, uniform_field
from .zeroset import Rule

__all__ = [
    "DEFAULT_MEMORY_BUDGET",
    "BYTES_PER_CELL",
    "MemoryBudgetExceeded",
    "NotBracketed",
    "CensoredTime",
    "LcEstimate",
    "SpanningEstimate",
    "cone_half_width",
    "first_occupation_time",
    "censored_median",
    "spans",
    "spanning_trial",
    "spanning_outcomes",
    "spanning_probability",
    "wilson_interval",
    "critical_length",
    "final_density",
]

DEFAULT_MEMORY_BUDGET = 2 * 1024**3
# birth + two arm-count planes + two frontier buffers + packed bits and field
BYTES_PER_CELL = 4 + 2 + 2 + 4 + 4 + 2


class MemoryBudgetExceeded(MemoryError):
    pass


class NotBracketed(RuntimeError):
    pass


@dataclass(frozen=True)
class CensoredTime:
    """First-occupation time; ``value is None`` means not reached by ``t_max``."""

    value: Optional[int]
    t_max: int

    def __post_init__(self):
        if self.value is not None and self.value > self.t_max:
            raise ValueError("uncensored value exceeds t_max")

    @property
    def censored(self) -> bool:
        return self.value is None


def cone_half_width(rho: int, t_max: int) -> int:
    return rho * (t_max + 1)


def first_occupation_time(rule: Rule, p: float, t_max: int, seed: int,
                          memory_budget: int = DEFAULT_MEMORY_BUDGET,
                          backend=None) -> CensoredTime:
    """Exact ``T`` on the plane when ``T <= t_max``, otherwise censored.

    The initial configuration is the site-addressable field of ``seed``, so
    a larger ``t_max`` with the same seed sees the same sites.
    """
    if t_max < 1:
        raise ValueError("t_max must be >= 1")
    half = cone_half_width(rule.rho, t_max)
    side = 2 * half + 1
    need = side * side * BYTES_PER_CELL
    if need > memory_budget:
        raise MemoryBudgetExceeded(
            f"box of side {side} needs ~{need / 2**20:.0f} MiB, budget {memory_budget / 2**20:.0f} MiB"
        )
    if p >= 1.0 or uniform_field(seed, 0, 0, 1, 1)[0, 0] < p:
        return CensoredTime(0, t_max)
    if p <= 0.0:
        # with a nonempty zero-set the empty plane is inert
        if not rule.zero_set.is_empty:
            return CensoredTime(None, t_max)
    occ = bernoulli_field(seed, p, -half, -half, side, side)
    cfg = Configuration.from_array(occ)
    stepper = _stepper(backend)
    out = run(cfg, rule, StopCondition(until_fixed=True, origin=(half, half), t_max=t_max),
              stepper=stepper)
    if out.stop_reason is StopReason.ORIGIN_OCCUPIED:
        return CensoredTime(out.stop_time, t_max)
    return CensoredTime(None, t_max)


def _stepper(backend):
    if backend is None:
        return step
    return lambda cfg, rule: step(cfg, rule, backend=backend)


def censored_median(samples: Sequence[CensoredTime]) -> Optional[float]:
    """Median with censored values treated as +inf.

    Returns None unless more than half the samples are uncensored, which is
    exactly when the middle order statistics are all observed.
    """
    n = len(samples)
    if n == 0:
        return None
    observed = sorted(s.value for s in samples if not s.censored)
    if len(observed) <= n // 2:
        return None
    if n % 2:
        return float(observed[n // 2])
    return (observed[n // 2 - 1] + observed[n // 2]) / 2


def spans(rule: Rule, n: int, config: Configuration, backend=None) -> Tuple[bool, Optional[int]]:
    """Whether the zero-boundary dynamics on ``B_n`` fills the box.

    Returns ``(spanned, time)`` where ``time`` is the first ``t`` with the
    box full (None when not spanned).  ``config`` is left untouched.
    """
    if config.width != n or config.height != n:
        raise ValueError(f"config is {config.width}x{config.height}, expected {n}x{n}")
    if config.boundary is not Boundary.ZERO:
        raise ValueError("spanning is defined with zero boundary")
    cfg = config.copy()
    run_to_fixation(cfg, rule, stepper=_stepper(backend))
    if not cfg.is_full():
        return False, None
    return True, int(cfg.birth.max())


def spanning_trial(rule: Rule, n: int, p: float, seed: int, backend=None) -> Tuple[bool, Optional[int]]:
    cfg = Configuration.from_array(bernoulli_field(seed, p, 0, 0, n, n))
    return spans(rule, n, cfg, backend=backend)


Z95 = 1.959963984540054


def wilson_interval(successes: int, trials: int, z: float = Z95) -> Tuple[float, float]:
    if trials < 1:
        raise ValueError("trials must be >= 1")
    phat = successes / trials
    denom = 1 + z * z / trials
    center = (phat + z * z / (2 * trials)) / denom
    half = z / denom * math.sqrt(phat * (1 - phat) / trials + z * z / (4 * trials * trials))
    lo = 0.0 if successes == 0 else max(0.0, center - half)
    hi = 1.0 if successes == trials else min(1.0, center + half)
    return lo, hi


class SpanningEstimate(NamedTuple):
    estimate: float
    interval: Tuple[float, float]


def spanning_outcomes(rule: Rule, n: int, p: float, trials: int, master_seed: int,
                      threads=None, backend=None) -> List[Tuple[bool, Optional[int]]]:
    """Per-trial ``spans`` results; trial ``i`` uses ``trial_seed(master_seed, i)``."""

    def one(i):
        return spanning_trial(rule, n, p, trial_seed(master_seed, i), backend=backend)

    return parallel_map(one, range(trials), threads)


def _span_successes(rule, n, p, trials, master_seed, threads, backend, log=None) -> int:
    outcomes = spanning_outcomes(rule, n, p, trials, master_seed, threads, backend)
    if log is not None:
        log[n] = outcomes
    return sum(ok for ok, _ in outcomes)


def spanning_probability(rule: Rule, n: int, p: float, trials: int, master_seed: int,
                         threads=None, backend=None) -> SpanningEstimate:
    """Monte Carlo spanning fraction with a 95% Wilson interval."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    k = _span_successes(rule, n, p, trials, master_seed, threads, backend)
    return SpanningEstimate(k / trials, wilson_interval(k, trials))


@dataclass
class LcEstimate:
    n_star: int
    trials_per_n: int
    probe_points: List[Tuple[int, int, int]] = field(default_factory=list)


def critical_length(rule: Rule, p: float, trials: int = 200, n_min: int = 4,
                    n_max: int = 4096, master_seed: int = 0, threads=None, backend=None,
                    trial_log: Optional[dict] = None) -> LcEstimate:
    """Smallest probed ``n`` whose estimated spanning probability is >= 1/2.

    Doubling sweep from ``n_min`` to bracket the crossing, then bisection on
    ``n``.  The same trial seeds are used at every ``n``.  If ``trial_log``
    is a dict it receives ``{n: [(spanned, time), ...]}`` for every probe.
    """
    if not 1 <= n_min < n_max:
        raise ValueError("need 1 <= n_min < n_max")
    probes = []
    cache = {}

    def hit(n):
        if n not in cache:
            k = _span_successes(rule, n, p, trials, master_seed, threads, backend, trial_log)
            probes.append((n, k, trials))
            cache[n] = 2 * k >= trials
        return cache[n]

    lo, hi = None, n_min
    while not hit(hi):
        if hi >= n_max:
            raise NotBracketed(f"spanning estimate stays below 1/2 on [{n_min}, {n_max}]")
        lo, hi = hi, min(2 * hi, n_max)
    if lo is not None:
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if hit(mid):
                hi = mid
            else:
                lo = mid
    return LcEstimate(hi, trials, probes)


def final_density(rule: Rule, n: int, p: float, boundary, seed: int, backend=None) -> float:
    """Occupied fraction of the fixed point on ``B_n``."""
    cfg = Configuration.from_array(bernoulli_field(seed, p, 0, 0, n, n), boundary)
    cfg.check_torus(rule.rho)
    return run_to_fixation(cfg, rule, stepper=_stepper(backend)).final_density
