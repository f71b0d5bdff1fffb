"""Closed-form critical powers in exact rational arithmetic.

``T`` (the first time the origin is occupied) scales like ``p**-gamma`` as
``p -> 0``.  Each function returns a :class:`PowerResult` when the power is
known, or a :class:`PowerBounds` pair of lower and upper powers.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, NamedTuple, Sequence, Tuple, Union

import numpy as np

from .zeroset import ZeroSet, bootstrap, l_finite, line, perturbed_line

__all__ = [
    "PowerKind",
    "PowerResult",
    "PowerBounds",
    "PowerFit",
    "Unsupported",
    "DegenerateFit",
    "m_hat_bootstrap",
    "m_hat_bootstrap_search",
    "gamma_bootstrap",
    "gamma_line",
    "gamma_perturbed_line",
    "gamma_l_finite",
    "l_finite_equal_arm_bounds",
    "l_finite_thin_arm_bounds",
    "gamma_l_infinite",
    "CatalogEntry",
    "small_catalog",
    "parametric_powers",
    "power_fit",
]


class PowerKind(str, enum.Enum):
    PURE_CRITICAL = "pure"
    CRITICAL = "critical"
    LOWER_BOUND = "lower"
    UPPER_BOUND = "upper"


@dataclass(frozen=True)
class PowerResult:
    value: Fraction
    kind: PowerKind
    source: str
    note: str = ""

    def __str__(self):
        return f"{self.value} ({self.kind.value})"


class PowerBounds(NamedTuple):
    lower: PowerResult
    upper: PowerResult

    def __str__(self):
        return f"[{self.lower.value}, {self.upper.value}]"


Powers = Union[PowerResult, PowerBounds]


class Unsupported(ValueError):
    """No closed form is known for these parameters."""


class DegenerateFit(ValueError):
    pass


def _bounds(lower, upper, source: str) -> PowerBounds:
    return PowerBounds(
        PowerResult(Fraction(lower), PowerKind.LOWER_BOUND, source),
        PowerResult(Fraction(upper), PowerKind.UPPER_BOUND, source),
    )


# bootstrap percolation


def m_hat_bootstrap(r: int) -> int:
    """``ceil((sqrt(9 + 8r) - 5) / 2)`` computed in integers."""
    if r < 1:
        raise ValueError("r must be >= 1")
    q = 9 + 8 * r
    root = math.isqrt(q)
    if root * root < q:
        root += 1  # ceil(sqrt(q))
    # smallest m with 2m + 5 >= sqrt(q), i.e. 2m + 5 >= ceil(sqrt(q))
    return -((5 - root) // 2)


def m_hat_bootstrap_search(r: int) -> int:
    """Largest ``m >= 0`` with ``-m^2 - 3m + 2r > 0`` (independent check)."""
    if r < 1:
        raise ValueError("r must be >= 1")
    m = 0
    while -(m + 1) ** 2 - 3 * (m + 1) + 2 * r > 0:
        m += 1
    return m


def gamma_bootstrap(r: int) -> PowerResult:
    m = m_hat_bootstrap(r)
    return PowerResult(
        Fraction((m + 1) * (2 * r - m), 2 * (m + 2)), PowerKind.PURE_CRITICAL, "bootstrap"
    )


# line growth


def gamma_line(r: int, s: int) -> PowerResult:
    if not 1 <= s <= r:
        raise ValueError(f"line growth needs 1 <= s <= r, got r={r}, s={s}")
    if s == 1:
        return PowerResult(Fraction(r, r + 1), PowerKind.PURE_CRITICAL, "line-thin")
    note = ""
    if r == s == 2:
        note = "T ~ p^-1 log(1/p); L_c ~ p^-1"
    return PowerResult(Fraction((r - 1) * s, r), PowerKind.CRITICAL, "line", note)


def gamma_perturbed_line(r: int, s: int) -> PowerResult:
    """Line growth with the ``(r-1, s-1)`` corner removed keeps the line power."""
    if not 2 <= s <= r:
        raise ValueError(f"perturbed line growth needs 2 <= s <= r, got r={r}, s={s}")
    return PowerResult(Fraction((r - 1) * s, r), PowerKind.CRITICAL, "perturbed-line")


# L-shapes


def _m_hat_l(r: int, s: int) -> int:
    # floor((-1 + sqrt(4r + 9)) / 2) without floating point
    q = 4 * r + 9
    return min((math.isqrt(q) - 1) // 2, s // 2)


def l_finite_equal_arm_bounds(r: int, s: int) -> PowerBounds:
    """Lower and upper powers for the finite L-shape with ``s1 = s2 = s``."""
    m = _m_hat_l(r, s)
    return _bounds(Fraction(m * (r - m + 1), 1 + m), Fraction(r * s, s + 1), "l-finite-equal-arms")


def l_finite_thin_arm_bounds(r: int, s: int) -> PowerBounds:
    """Lower and upper powers for the finite L-shape with ``s1 = 1, s2 = s``."""
    return _bounds(s - Fraction(s, r), s + 1 - Fraction(2 * s + 1, r + 1), "l-finite-thin-arm-bounds")


def gamma_l_finite(r: int, s1: int, s2: int) -> Powers:
    """Finite L-shape with minimal counts (0, r), (s1, s2), (r, 0).

    Exact cases are tried first, then bound pairs.  The branch taken is
    recorded in ``source``.
    """
    if not (1 <= s1 < r and 1 <= s2 < r):
        raise ValueError(f"finite L-shape needs 1 <= s1, s2 < r, got r={r}, s1={s1}, s2={s2}")
    if s1 == 1 and 2 * s2 <= r:
        return PowerResult(Fraction(r, 2), PowerKind.PURE_CRITICAL, "l-finite-thin-arm")
    if s1 == s2 == 2 and r >= 6:
        return PowerResult(Fraction(2 * r, 3), PowerKind.PURE_CRITICAL, "l-finite-double-arm")
    if s1 == s2:
        return l_finite_equal_arm_bounds(r, s1)
    if s1 == 1:
        return l_finite_thin_arm_bounds(r, s2)
    raise Unsupported(f"no power known for finite L-shape r={r}, s1={s1}, s2={s2}")


def gamma_l_infinite(r: int, s1: int, s2: int) -> PowerResult:
    """Infinite L-shape with minimal counts (0, r) and (s1, s2)."""
    if not (1 <= s2 < r and s1 >= 1):
        raise ValueError(f"infinite L-shape needs 1 <= s2 < r and s1 >= 1, got r={r}, s1={s1}, s2={s2}")
    return PowerResult(Fraction(r * s1 + s2, 1 + s1), PowerKind.PURE_CRITICAL, "l-infinite")


# zero-sets inside the 3x3 box


class CatalogEntry(NamedTuple):
    zero_set: ZeroSet
    powers: Powers
    fits_3x3: bool


def _pure(v, src):
    return PowerResult(Fraction(v), PowerKind.PURE_CRITICAL, src)


def _crit(v, src, note=""):
    return PowerResult(Fraction(v), PowerKind.CRITICAL, src, note)


def small_catalog() -> List[CatalogEntry]:
    """All 13 zero-sets within the 3x3 box (up to reflection), plus two
    4-wide sets whose power is only bracketed.

    Rows are listed bottom first, height never above width.
    """
    F = Fraction
    table = [
        ((1,), _pure(F(1, 2), "catalog:voracious")),
        ((2,), _pure(F(2, 3), "catalog:line-thin")),
        ((3,), _pure(F(3, 4), "catalog:line-thin")),
        ((2, 1), _pure(1, "catalog:bootstrap")),
        ((3, 1), _pure(1, "catalog:small-L")),
        ((2, 2), _crit(1, "catalog:line", "not pure: T ~ p^-1 log(1/p)")),
        ((3, 2), _crit(F(4, 3), "catalog:perturbed-line", "purity unresolved")),
        ((3, 3), _crit(F(4, 3), "catalog:line", "purity unresolved")),
        ((3, 1, 1), _pure(F(3, 2), "catalog:l-finite")),
        ((3, 2, 1), _pure(F(5, 3), "catalog:bootstrap")),
        ((3, 2, 2), _pure(F(5, 3), "catalog:three-lines")),
        ((3, 3, 2), _crit(2, "catalog:perturbed-line", "purity unresolved")),
        ((3, 3, 3), _crit(2, "catalog:line", "suspected not pure")),
        ((4, 2, 2), _bounds(F(5, 3), 2, "catalog:unresolved")),
        ((4, 3, 3), _bounds(2, F(9, 4), "catalog:unresolved")),
    ]
    return [CatalogEntry(ZeroSet(rows), res, max(rows) <= 3) for rows, res in table]


def parametric_powers(z: ZeroSet) -> List[Tuple[str, Powers]]:
    """Every parametric family formula that covers ``z`` or its transpose."""
    from .zeroset import transpose

    candidates = {z}
    if z.is_finite:
        candidates.add(transpose(z))
    out = []
    for c in candidates:
        rows = c.rows
        if not rows or not c.is_finite:
            continue
        r, h = rows[0], len(rows)
        if c == bootstrap(r):
            out.append(("bootstrap", gamma_bootstrap(r)))
        if h <= r and c == line(r, h):
            out.append(("line", gamma_line(r, h)))
        if 2 <= h <= r and c == perturbed_line(r, h):
            out.append(("perturbed-line", gamma_perturbed_line(r, h)))
        if h == r:
            for s2 in range(1, r):
                for s1 in range(1, r):
                    if c == l_finite(r, s1, s2):
                        try:
                            out.append(("l-finite", gamma_l_finite(r, s1, s2)))
                        except Unsupported:
                            pass
    return out


# empirical exponent


class PowerFit(NamedTuple):
    slope: float
    intercept: float
    stderr: float


def power_fit(points: Sequence[Tuple[float, float]]) -> PowerFit:
    """Least-squares line through ``(log(1/p), log(median_T))``."""
    pts = [(float(p), float(t)) for p, t in points]
    if len({p for p, _ in pts}) < 2:
        raise DegenerateFit("need at least two distinct p values")
    if len(pts) < 3:
        raise ValueError("need at least 3 points")
    if any(not (0 < p) or not (t > 0) or not math.isfinite(t) for p, t in pts):
        raise ValueError("p and median T must be positive and finite")
    x = np.log([1.0 / p for p, _ in pts])
    y = np.log([t for _, t in pts])
    xm, ym = x.mean(), y.mean()
    sxx = float(((x - xm) ** 2).sum())
    slope = float(((x - xm) * (y - ym)).sum()) / sxx
    intercept = float(ym - slope * xm)
    resid = y - (intercept + slope * x)
    dof = len(pts) - 2
    stderr = math.sqrt(float((resid**2).sum()) / dof / sxx) if dof > 0 else float("nan")
    return PowerFit(slope, intercept, stderr)
