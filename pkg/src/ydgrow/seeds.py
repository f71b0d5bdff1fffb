"""Deterministic initial patterns.

All pattern cells get birth time 0.
"""

from __future__ import annotations

from .grid import Boundary, Configuration
from .zeroset import Rule, ZeroSet

__all__ = [
    "PatternTooLarge",
    "packed_strip",
    "filled_adjacent_lines",
    "diagonal_nucleus",
    "parallel_lines",
    "vertical_interval",
]


class PatternTooLarge(ValueError):
    pass


def _height_of(rule) -> int:
    z = rule.zero_set if isinstance(rule, Rule) else rule
    if not isinstance(z, ZeroSet):
        raise TypeError("expected a Rule or ZeroSet")
    return z.height


def packed_strip(rule, n: int, boundary=Boundary.ZERO, row: int = 0, col: int = 0) -> Configuration:
    """A packed strip of ``r`` rows at the bottom of ``B_n``.

    ``r`` is the zero-set height (the threshold for bootstrap percolation).
    Row ``row + j`` holds ``r - j`` contiguous occupied cells starting at
    column ``col``.
    """
    r = _height_of(rule)
    if r < 1:
        raise ValueError("packed strip needs a nonempty zero-set")
    if row + r > n or col + r > n:
        raise PatternTooLarge(f"packed strip of {r} rows does not fit in B_{n}")
    cfg = Configuration(n, n, boundary)
    for j in range(r):
        cfg.birth[row + j, col : col + r - j] = 0
    cfg.sync_bits()
    return cfg


def _lines(positions, orientation: str, n: int, boundary) -> Configuration:
    if orientation not in ("horizontal", "vertical"):
        raise ValueError("orientation must be 'horizontal' or 'vertical'")
    positions = list(positions)
    if any(not 0 <= q < n for q in positions):
        raise PatternTooLarge(f"lines at {positions} do not fit in B_{n}")
    cfg = Configuration(n, n, boundary)
    for q in positions:
        if orientation == "horizontal":
            cfg.birth[q, :] = 0
        else:
            cfg.birth[:, q] = 0
    cfg.sync_bits()
    return cfg


def filled_adjacent_lines(k: int, orientation: str, n: int, offset: int = 0,
                          boundary=Boundary.ZERO) -> Configuration:
    """``k`` adjacent fully occupied lines starting at ``offset``."""
    return _lines(range(offset, offset + k), orientation, n, boundary)


def parallel_lines(k: int, spacing: int, orientation: str, n: int, offset: int = 0,
                   boundary=Boundary.ZERO) -> Configuration:
    """``k`` fully occupied parallel lines, ``spacing`` apart."""
    if k > 1 and spacing < 1:
        raise ValueError("spacing must be positive")
    return _lines((offset + i * spacing for i in range(k)), orientation, n, boundary)


def diagonal_nucleus(r: int, n: int = None, offset: int = None,
                     boundary=Boundary.ZERO) -> Configuration:
    """``r`` diagonally adjacent cells ``(offset+i, offset+i)``.

    Defaults: ``n = 3r`` and the diagonal centered in the box.
    """
    if n is None:
        n = 3 * r
    if offset is None:
        offset = (n - r) // 2
    if offset < 0 or offset + r > n:
        raise PatternTooLarge(f"diagonal of length {r} does not fit in B_{n}")
    cfg = Configuration(n, n, boundary)
    for i in range(r):
        cfg.birth[offset + i, offset + i] = 0
    cfg.sync_bits()
    return cfg


def vertical_interval(length: int, n: int, x: int = None, y: int = None,
                      boundary=Boundary.ZERO) -> Configuration:
    """``length`` contiguous occupied cells in one column."""
    x = n // 2 if x is None else x
    y = (n - length) // 2 if y is None else y
    if not (0 <= x < n and 0 <= y and y + length <= n):
        raise PatternTooLarge(f"interval of length {length} does not fit in B_{n}")
    cfg = Configuration(n, n, boundary)
    cfg.birth[y : y + length, x] = 0
    cfg.sync_bits()
    return cfg
