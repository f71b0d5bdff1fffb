"""Invariant suites run by ``ydgrow verify``.

Each suite draws random instances from a seeded numpy ``Generator`` and
checks one property exactly.  The optimized stepper is injectable so a
deliberately broken engine can be shown to fail the oracle suite.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction as F
from typing import Callable, Dict, List, Optional

import numpy as np
from scipy.ndimage import distance_transform_cdt

from . import seeds
from .engine import run_to_fixation, saturated_closure, step, step_naive, step_scan, is_inert
from .grid import NEVER, Boundary, Configuration
from .theory import (
    PowerBounds,
    PowerKind,
    gamma_bootstrap,
    m_hat_bootstrap,
    m_hat_bootstrap_search,
    parametric_powers,
    small_catalog,
)
from .zeroset import INF, Rule, ZeroSet, bootstrap, l_finite, line, transpose

__all__ = ["SUITES", "DEFAULT_COUNTS", "SuiteResult", "Report", "verify",
           "BOOTSTRAP_TABLE", "CATALOG_REFERENCE"]

Stepper = Callable[[Configuration, Rule], int]

# published gamma_c and m_hat for bootstrap thresholds r = 1..20
BOOTSTRAP_TABLE = {
    1: (F(1, 2), 0), 2: (F(1), 0), 3: (F(5, 3), 1), 4: (F(7, 3), 1), 5: (F(3), 1),
    6: (F(15, 4), 2), 7: (F(9, 2), 2), 8: (F(21, 4), 2), 9: (F(6), 2), 10: (F(34, 5), 3),
    11: (F(38, 5), 3), 12: (F(42, 5), 3), 13: (F(46, 5), 3), 14: (F(10), 3),
    15: (F(65, 6), 4), 16: (F(35, 3), 4), 17: (F(25, 2), 4), 18: (F(40, 3), 4),
    19: (F(85, 6), 4), 20: (F(15), 4),
}

# published powers for small zero-sets (rows bottom first); a pair is (lower, upper)
CATALOG_REFERENCE = {
    (1,): F(1, 2), (2,): F(2, 3), (3,): F(3, 4),
    (2, 1): F(1), (3, 1): F(1), (2, 2): F(1),
    (3, 2): F(4, 3), (3, 3): F(4, 3),
    (3, 1, 1): F(3, 2), (3, 2, 1): F(5, 3), (3, 2, 2): F(5, 3),
    (3, 3, 2): F(2), (3, 3, 3): F(2),
    (4, 2, 2): (F(5, 3), F(2)), (4, 3, 3): (F(2), F(9, 4)),
}

DEFAULT_COUNTS = {
    "oracle-equivalence": 10_000,
    "solidification": 300,
    "monotonicity": 200,
    "speed-of-light": 300,
    "transpose": 300,
    "domination": 500,
    "inertness": 20,
}


@dataclass
class SuiteResult:
    name: str
    passed: int
    total: int
    seconds: float
    failures: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.passed == self.total

    def line(self) -> str:
        mark = "PASS" if self.ok else "FAIL"
        return f"{mark} {self.name:<20} {self.passed}/{self.total}  ({self.seconds:.2f}s)"


@dataclass
class Report:
    results: List[SuiteResult]

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.results)

    def text(self) -> str:
        lines = [r.line() for r in self.results]
        for r in self.results:
            lines += [f"  {r.name}: {msg}" for msg in r.failures[:5]]
        return "\n".join(lines)


class _Tally:
    def __init__(self):
        self.passed = self.total = 0
        self.failures: List[str] = []

    def check(self, ok: bool, msg: str):
        self.total += 1
        if ok:
            self.passed += 1
        else:
            self.failures.append(msg)


# random instances


def random_zeroset(rng, rho: int, max_height: int = 5, finite: bool = False,
                   wide: bool = False) -> ZeroSet:
    """Nonincreasing rows with height <= min(rho, max_height), widths <= rho or INF.

    ``wide`` forces ``width >= height`` (needed for vertical-line inertness).
    """
    h = int(rng.integers(0, min(rho, max_height) + 1))
    choices = list(range(1, rho + 1)) + ([] if finite else [INF])
    rows, cap = [], None
    for _ in range(h):
        opts = [w for w in choices if cap is None or w <= cap]
        w = opts[int(rng.integers(len(opts)))]
        rows.append(w)
        cap = w
    if wide and rows and rows[0] is not INF and rows[0] < h:
        rows[0] = h
    return ZeroSet(tuple(rows))


def random_instance(rng, max_side: int = 64, max_rho: int = 5, finite: bool = False,
                    nonempty: bool = False):
    rho = int(rng.integers(1, max_rho + 1))
    z = random_zeroset(rng, rho, finite=finite)
    while nonempty and z.is_empty:
        z = random_zeroset(rng, rho, finite=finite)
    rule = Rule(z, rho)
    boundary = Boundary.PERIODIC if rng.random() < 0.5 else Boundary.ZERO
    if boundary is Boundary.PERIODIC:
        n = int(rng.integers(2 * rho + 1, max(2 * rho + 2, max_side + 1)))
        w = h = n
    else:
        w = int(rng.integers(1, max_side + 1))
        h = int(rng.integers(1, max_side + 1))
    p = float(rng.choice([0.01, 0.03, 0.08, 0.15, 0.3, 0.6]))
    cfg = Configuration.from_array(rng.random((h, w)) < p, boundary)
    return rule, cfg


def _occ(cfg: Configuration) -> np.ndarray:
    return cfg.birth != NEVER


def _closure(cfg: Configuration, rule: Rule, stepper: Stepper) -> Configuration:
    out = cfg.copy()
    run_to_fixation(out, rule, stepper=stepper)
    return out


# suites


def suite_oracle(rng, count: int, stepper: Stepper) -> _Tally:
    t = _Tally()
    for i in range(count):
        rule, a = random_instance(rng)
        b = a.copy()
        # a few small instances also go through the scalar scan in a shuffled order
        scan = a.width * a.height <= 144 and i % 25 == 0
        c = a.copy() if scan else None
        ok, k = True, 0
        while ok:
            ca = stepper(a, rule)
            cb = step_naive(b, rule)
            ok = ca == cb and a.same_state(b)
            if scan and ok:
                order = [(int(q) % c.width, int(q) // c.width)
                         for q in rng.permutation(c.width * c.height)]
                ok = step_scan(c, rule, order) == cb and c.same_state(b)
            k += 1
            if cb == 0:
                break
        t.check(ok, f"{rule} on {a!r}: mismatch at step {k}")
    return t


def suite_solidification(rng, count: int, stepper: Stepper) -> _Tally:
    t = _Tally()
    for _ in range(count):
        rule, cfg = random_instance(rng, max_side=40)
        ok, steps, limit = True, 0, cfg.width * cfg.height + 1
        while ok:
            before = cfg.birth.copy()
            changed = stepper(cfg, rule)
            steps += 1
            kept = before != NEVER
            ok = bool(np.array_equal(cfg.birth[kept], before[kept])) and steps <= limit
            if changed == 0:
                break
        t.check(ok, f"{rule}: occupied cell changed or no fixation within {limit} steps")
    return t


def suite_monotonicity(rng, count: int, stepper: Stepper) -> _Tally:
    t = _Tally()
    for _ in range(count):
        rule, small = random_instance(rng, max_side=48)
        extra = rng.random((small.height, small.width)) < float(rng.choice([0.02, 0.05, 0.1]))
        big = Configuration.from_array(_occ(small) | extra, small.boundary)
        a, b = _occ(_closure(small, rule, stepper)), _occ(_closure(big, rule, stepper))
        t.check(not (a & ~b).any(), f"{rule}: closure of a subset is not a subset")
    return t


def suite_speed_of_light(rng, count: int, stepper: Stepper) -> _Tally:
    t = _Tally()
    for _ in range(count):
        rule, cfg = random_instance(rng, max_side=40, nonempty=True)
        init = _occ(cfg)
        out = _closure(cfg, rule, stepper)
        occ = _occ(out)
        if not init.any():
            t.check(not occ.any(), f"{rule}: growth from the empty configuration")
            continue
        if cfg.boundary is Boundary.PERIODIC:
            tiled = np.tile(~init, (3, 3))
            dist = distance_transform_cdt(tiled, metric="taxicab")
            dist = dist[cfg.height : 2 * cfg.height, cfg.width : 2 * cfg.width]
        else:
            dist = distance_transform_cdt(~init, metric="taxicab")
        born = out.birth.astype(np.int64)
        ok = bool((dist[occ] <= rule.rho * born[occ]).all())
        t.check(ok, f"{rule}: a cell was born faster than rho per step")
    return t


def suite_transpose(rng, count: int, stepper: Stepper) -> _Tally:
    t = _Tally()
    for _ in range(count):
        rule, cfg = random_instance(rng, max_side=40, finite=True)
        trule = Rule(transpose(rule.zero_set), rule.rho)
        a, b = cfg.copy(), cfg.transposed()
        ok = True
        while ok:
            ca, cb = stepper(a, rule), stepper(b, trule)
            ok = ca == cb and np.array_equal(a.birth.T, b.birth)
            if ca == 0:
                break
        t.check(ok, f"{rule}: transposing does not commute with step")
    return t


def suite_domination(rng, count: int, stepper: Stepper) -> _Tally:
    t = _Tally()
    for _ in range(count):
        rho = int(rng.integers(1, 6))
        r = int(rng.integers(1, rho + 1))
        s = int(rng.integers(1, r + 1))
        rule = Rule(line(r, s), rho)
        _, cfg = random_instance(rng, max_side=48, max_rho=rho)
        if cfg.boundary is Boundary.PERIODIC and cfg.width < 2 * rho + 1:
            cfg = Configuration.from_array(_occ(cfg), Boundary.ZERO)
        real = _occ(_closure(cfg, rule, stepper))
        coarse = _occ(saturated_closure(cfg, rule, 2 * rho + 1))
        t.check(not (real & ~coarse).any(), f"{rule}: real closure escapes the saturated closure")
    return t


def suite_inertness(rng, count: int, stepper: Stepper) -> _Tally:
    t = _Tally()
    for _ in range(count):
        rho = int(rng.integers(1, 6))
        z = random_zeroset(rng, rho, wide=True)
        while z.is_empty:
            z = random_zeroset(rng, rho, wide=True)
        rule = Rule(z, rho)
        n = int(rng.integers(max(z.height, 2), 41))
        for orientation in ("horizontal", "vertical"):
            pos = rng.choice(n, size=z.height - 1, replace=False)
            cfg = seeds._lines(sorted(int(q) for q in pos), orientation, n, Boundary.ZERO)
            t.check(is_inert(cfg, rule), f"{rule}: {z.height - 1} {orientation} lines not inert")
    for r in range(2, 6):
        for s in range(1, r):
            for rho in range(r, 6):
                rule = Rule(line(r, s), rho)
                n = 4 * rho + 3
                col = seeds.parallel_lines(1, 1, "vertical", n, offset=n // 2)
                t.check(is_inert(col, rule), f"{rule}: full vertical line not inert")
                start = seeds.vertical_interval(s, n)
                out = _closure(start, rule, stepper)
                want = np.zeros((n, n), bool)
                want[:, n // 2] = True
                t.check(np.array_equal(_occ(out), want),
                        f"{rule}: vertical interval of {s} cells does not yield exactly a column")
    return t


def suite_packed_strip(rng, count: int, stepper: Stepper) -> _Tally:
    t = _Tally()
    for r in (2, 3, 4):
        rule = Rule(bootstrap(r), r)
        for n in (32, 64, 128):
            cfg = seeds.packed_strip(rule, n)
            run_to_fixation(cfg, rule, stepper=stepper)
            last = int(cfg.birth.max())
            t.check(cfg.is_full() and last <= (r + 1) * n,
                    f"bootstrap({r}), n={n}: full={cfg.is_full()} last birth {last}")
    return t


def suite_diagonal(rng, count: int, stepper: Stepper) -> _Tally:
    t = _Tally()
    for r in range(2, 7):
        rule = Rule(l_finite(r, 1, 1), r)
        cfg = seeds.diagonal_nucleus(r)
        lo = (cfg.width - r) // 2
        for _ in range(r):
            stepper(cfg, rule)
        square = cfg.birth[lo : lo + r, lo : lo + r]
        t.check(bool((square <= r).all()), f"r={r}: square not occupied within {r} steps")
    return t


def suite_bootstrap_table(rng, count: int, stepper: Stepper) -> _Tally:
    t = _Tally()
    for r, (g, m) in BOOTSTRAP_TABLE.items():
        t.check(gamma_bootstrap(r).value == g, f"gamma_bootstrap({r}) = {gamma_bootstrap(r).value}, want {g}")
        t.check(m_hat_bootstrap(r) == m, f"m_hat_bootstrap({r}) = {m_hat_bootstrap(r)}, want {m}")
    for r in range(1, 10_001):
        if m_hat_bootstrap(r) != m_hat_bootstrap_search(r):
            t.check(False, f"m_hat forms disagree at r={r}")
            break
    else:
        t.check(True, "")
    return t


def _values(powers):
    if isinstance(powers, PowerBounds):
        return (powers.lower.value, powers.upper.value)
    return powers.value


def suite_catalog(rng, count: int, stepper: Stepper) -> _Tally:
    t = _Tally()
    cat = small_catalog()
    t.check(sum(e.fits_3x3 for e in cat) == 13, "catalog does not hold 13 zero-sets in the 3x3 box")
    seen = {}
    for e in cat:
        seen[e.zero_set.rows] = e
        want = CATALOG_REFERENCE.get(e.zero_set.rows)
        t.check(_values(e.powers) == want, f"{e.zero_set}: {_values(e.powers)} != {want}")
        if isinstance(e.powers, PowerBounds):
            continue
        for family, res in parametric_powers(e.zero_set):
            if isinstance(res, PowerBounds):
                lo, hi = res.lower.value, res.upper.value
                t.check(lo <= e.powers.value <= hi, f"{e.zero_set}: outside {family} bounds")
            else:
                t.check(res.value == e.powers.value, f"{e.zero_set}: {family} gives {res.value}")
                if res.kind is PowerKind.PURE_CRITICAL:
                    t.check(e.powers.kind is PowerKind.PURE_CRITICAL,
                            f"{e.zero_set}: {family} says pure")
    t.check(set(seen) == set(CATALOG_REFERENCE), "catalog rows differ from the reference list")
    return t


SUITES: Dict[str, Callable] = {
    "oracle-equivalence": suite_oracle,
    "solidification": suite_solidification,
    "monotonicity": suite_monotonicity,
    "speed-of-light": suite_speed_of_light,
    "transpose": suite_transpose,
    "domination": suite_domination,
    "inertness": suite_inertness,
    "packed-strip": suite_packed_strip,
    "diagonal-nucleus": suite_diagonal,
    "bootstrap-table": suite_bootstrap_table,
    "catalog": suite_catalog,
}


def verify(suites: Optional[List[str]] = None, counts: Optional[Dict[str, int]] = None,
           seed: int = 0, stepper: Stepper = step, scale: float = 1.0) -> Report:
    """Run the named suites (all by default).

    ``counts`` overrides per-suite instance counts; ``scale`` multiplies the
    defaults (handy for quick smoke runs).
    """
    names = list(SUITES) if not suites else list(suites)
    unknown = [s for s in names if s not in SUITES]
    if unknown:
        raise KeyError(f"unknown suites {unknown}; choose from {list(SUITES)}")
    counts = dict(counts or {})
    results = []
    for k, name in enumerate(names):
        n = counts.get(name, max(1, int(DEFAULT_COUNTS.get(name, 1) * scale)))
        rng = np.random.default_rng([seed, k])
        t0 = time.perf_counter()
        tally = SUITES[name](rng, n, stepper)
        results.append(SuiteResult(name, tally.passed, tally.total,
                                   time.perf_counter() - t0, tally.failures))
    return Report(results)
