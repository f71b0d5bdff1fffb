"""Young-diagram zero-sets and validated growth rules.

A zero-set is stored as its nonincreasing row widths: row ``v`` contains the
cells ``(u, v)`` with ``u < width[v]``.  A width may be :data:`INF`, the
distinguished "unbounded" value that compares above every integer.

A site becomes occupied when the pair (horizontal count, vertical count) of
occupied sites on its cross neighborhood falls *outside* the zero-set.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

import numpy as np

__all__ = [
    "INF",
    "ZeroSet",
    "Rule",
    "ZeroSetError",
    "NonMonotone",
    "Inconsistent",
    "HeightExceedsRange",
    "WidthExceedsRange",
    "InfiniteWidth",
    "from_row_widths",
    "from_minimal_counts",
    "minimal_counts",
    "contains",
    "normalize",
    "transpose",
    "validate_rule",
    "bootstrap",
    "line",
    "perturbed_line",
    "l_finite",
    "l_infinite",
    "parse_zeroset",
    "format_zeroset",
    "zeroset_to_json",
    "zeroset_from_json",
]


class _Infinity:
    """Sentinel width ordered above every integer.

    Arithmetic is deliberately unsupported; only comparisons are defined.
    """

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INF"

    def __str__(self):
        return "inf"

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("ydgrow.INF")

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return other is self

    def __gt__(self, other):
        return other is not self

    def __ge__(self, other):
        return True

    def __reduce__(self):
        return (_Infinity, ())


INF = _Infinity()

Width = Union[int, _Infinity]


class ZeroSetError(ValueError):
    """Base class for invalid zero-sets and rules."""


class NonMonotone(ZeroSetError):
    pass


class Inconsistent(ZeroSetError):
    pass


class HeightExceedsRange(ZeroSetError):
    pass


class WidthExceedsRange(ZeroSetError):
    pass


class InfiniteWidth(ZeroSetError):
    pass


def _check_width(w) -> Width:
    if w is INF:
        return INF
    if isinstance(w, (bool, np.bool_)) or not isinstance(w, (int, np.integer)):
        raise TypeError(f"row width must be an integer or INF, got {w!r}")
    w = int(w)
    if w < 0:
        raise ZeroSetError(f"negative row width {w}")
    return w


@dataclass(frozen=True)
class ZeroSet:
    """Immutable Young diagram given by row widths (bottom row first)."""

    rows: tuple

    def __post_init__(self):
        rows = tuple(_check_width(w) for w in self.rows)
        for v in range(1, len(rows)):
            if rows[v] > rows[v - 1]:
                raise NonMonotone(f"row widths increase at row {v}: {list(rows)}")
        while rows and rows[-1] == 0:
            rows = rows[:-1]
        object.__setattr__(self, "rows", rows)

    @property
    def height(self) -> int:
        return len(self.rows)

    h = height

    @property
    def width(self) -> Width:
        return self.rows[0] if self.rows else 0

    @property
    def is_finite(self) -> bool:
        return all(w is not INF for w in self.rows)

    @property
    def is_empty(self) -> bool:
        return not self.rows

    def __contains__(self, cell) -> bool:
        u, v = cell
        return contains(self, u, v)

    def __str__(self):
        return format_zeroset(self)


@dataclass(frozen=True)
class Rule:
    """A zero-set paired with a neighborhood range ``rho``.

    Build instances with :func:`validate_rule`; the constructor checks the
    supercriticality constraints but does not normalize.
    """

    zero_set: ZeroSet
    rho: int

    def __post_init__(self):
        if self.rho < 1:
            raise ZeroSetError(f"rho must be positive, got {self.rho}")
        z = self.zero_set
        if z.height > self.rho:
            raise HeightExceedsRange(f"height {z.height} exceeds rho={self.rho}")
        for w in z.rows:
            if w is not INF and w > self.rho:
                raise WidthExceedsRange(f"row width {w} exceeds rho={self.rho}")

    @property
    def arm(self) -> int:
        """Number of sites on one arm of the cross, center included."""
        return 2 * self.rho + 1

    def growth_table(self) -> np.ndarray:
        """``table[h, v]`` is 1 where the count pair lies outside the zero-set."""
        n = self.arm + 1
        table = np.ones((n, n), dtype=np.uint8)
        for v, w in enumerate(self.zero_set.rows):
            table[: n if w is INF else min(w, n), v] = 0
        return table

    def __str__(self):
        return f"{format_zeroset(self.zero_set)} / rho={self.rho}"


def from_row_widths(widths: Iterable) -> ZeroSet:
    return ZeroSet(tuple(widths))


def contains(z: ZeroSet, u: int, v: int) -> bool:
    """Membership of the count pair ``(u, v)`` in ``z``."""
    if u < 0 or v < 0:
        raise ValueError("counts must be nonnegative")
    return v < z.height and u < z.rows[v]


def minimal_counts(z: ZeroSet) -> set:
    """Corner pairs just outside ``z``.

    The empty zero-set has the single minimal count ``(0, 0)``.
    """
    if z.is_empty:
        return {(0, 0)}
    out = {(0, z.height)}
    for v, w in enumerate(z.rows):
        if w is INF:
            continue
        if v == 0 or w < z.rows[v - 1]:
            out.add((w, v))
    return out


def from_minimal_counts(counts: Iterable[Sequence[int]]) -> ZeroSet:
    """Rebuild the zero-set whose minimal counts are exactly ``counts``.

    Rows below the lowest count carry no horizontal cap and become INF; the
    count with ``u == 0`` fixes the height.
    """
    pts = sorted({(int(u), int(v)) for u, v in counts}, key=lambda c: c[1])
    if not pts:
        raise Inconsistent("at least one minimal count is required")
    if any(u < 0 or v < 0 for u, v in pts):
        raise Inconsistent("minimal counts must be nonnegative")
    if sum(1 for u, _ in pts if u == 0) != 1:
        raise Inconsistent("exactly one minimal count must have u == 0 (finite height)")
    if sum(1 for _, v in pts if v == 0) > 1:
        raise Inconsistent("at most one minimal count may have v == 0")
    for (u0, v0), (u1, v1) in zip(pts, pts[1:]):
        if not (v1 > v0 and u1 < u0):
            raise Inconsistent(f"counts {(u0, v0)} and {(u1, v1)} are not a staircase")
    height = pts[-1][1]
    rows = []
    for v in range(height):
        cap = [u for u, vv in pts if vv <= v]
        rows.append(cap[-1] if cap else INF)
    z = ZeroSet(tuple(rows))
    if minimal_counts(z) != set(pts):
        raise Inconsistent(f"no Young diagram has minimal counts {sorted(pts)}")
    return z


def normalize(z: ZeroSet, rho: int) -> ZeroSet:
    """Replace every finite row wider than ``rho`` by an infinite row.

    Note: an empty site sees at most ``2*rho`` occupied sites on one arm, so
    the replacement leaves the dynamics unchanged only for rows wider than
    ``2*rho``.  Rows with ``rho < width <= 2*rho`` are still widened here;
    use ``validate_rule(..., strict=True)`` to reject them instead.
    """
    if rho < 1:
        raise ZeroSetError(f"rho must be positive, got {rho}")
    if z.height > rho:
        raise HeightExceedsRange(f"height {z.height} exceeds rho={rho}")
    return ZeroSet(tuple(INF if (w is not INF and w > rho) else w for w in z.rows))


def transpose(z: ZeroSet) -> ZeroSet:
    """Conjugate diagram: rows become columns."""
    if not z.is_finite:
        raise InfiniteWidth("cannot transpose a zero-set with an infinite row")
    return ZeroSet(tuple(sum(1 for w in z.rows if w > c) for c in range(z.width)))


def validate_rule(z: ZeroSet, rho: int, strict: bool = False) -> Rule:
    """Check the range constraints and return a :class:`Rule`.

    By default rows wider than ``rho`` are widened to INF (see
    :func:`normalize`); with ``strict=True`` they raise
    :class:`WidthExceedsRange`.
    """
    if rho < 1:
        raise ZeroSetError(f"rho must be positive, got {rho}")
    if z.height > rho:
        raise HeightExceedsRange(f"height {z.height} exceeds rho={rho}")
    if strict:
        return Rule(z, rho)
    return Rule(normalize(z, rho), rho)


# named families


def bootstrap(r: int) -> ZeroSet:
    """Threshold-``r`` bootstrap percolation: ``{(u, v): u + v <= r - 1}``."""
    if r < 1:
        raise ValueError("bootstrap threshold must be >= 1")
    return ZeroSet(tuple(range(r, 0, -1)))


def line(r: int, s: int) -> ZeroSet:
    if not 1 <= s <= r:
        raise ValueError(f"line growth needs 1 <= s <= r, got r={r}, s={s}")
    return ZeroSet((r,) * s)


def perturbed_line(r: int, s: int) -> ZeroSet:
    """Line growth with the corner cell ``(r-1, s-1)`` removed."""
    if not 2 <= s <= r:
        raise ValueError(f"perturbed line growth needs 2 <= s <= r, got r={r}, s={s}")
    return ZeroSet((r,) * (s - 1) + (r - 1,))


def l_finite(r: int, s1: int, s2: int) -> ZeroSet:
    """Finite L-shape with minimal counts (0, r), (s1, s2), (r, 0)."""
    if not (1 <= s1 < r and 1 <= s2 < r):
        raise ValueError(f"finite L-shape needs 1 <= s1, s2 < r, got r={r}, s1={s1}, s2={s2}")
    return ZeroSet((r,) * s2 + (s1,) * (r - s2))


def l_infinite(r: int, s1: int, s2: int) -> ZeroSet:
    """Infinite L-shape with minimal counts (0, r) and (s1, s2)."""
    if not (1 <= s2 < r and s1 >= 1):
        raise ValueError(f"infinite L-shape needs 1 <= s2 < r and s1 >= 1, got r={r}, s1={s1}, s2={s2}")
    return ZeroSet((INF,) * s2 + (s1,) * (r - s2))


# text / JSON forms


def _parse_token(tok) -> Width:
    if isinstance(tok, str):
        t = tok.strip().lower()
        if t in ("inf", "infinity", "∞"):
            return INF
        try:
            return int(t)
        except ValueError:
            raise ZeroSetError(f"bad row width token {tok!r}") from None
    return _check_width(tok)


def parse_zeroset(text: str) -> ZeroSet:
    """Parse ``"3 2 1"`` or ``"inf 2 2"`` (bottom row first)."""
    return ZeroSet(tuple(_parse_token(t) for t in text.split()))


def format_zeroset(z: ZeroSet) -> str:
    return " ".join(str(w) for w in z.rows)


def zeroset_to_json(z: ZeroSet) -> str:
    return json.dumps({"rows": ["inf" if w is INF else w for w in z.rows]})


def zeroset_from_json(data) -> ZeroSet:
    if isinstance(data, (str, bytes)):
        data = json.loads(data)
    if not isinstance(data, dict) or "rows" not in data:
        raise ZeroSetError('expected an object with a "rows" list')
    return ZeroSet(tuple(_parse_token(t) for t in data["rows"]))
