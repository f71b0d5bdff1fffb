"""Occupancy configurations on finite boxes.

Cells are addressed as ``(x, y)`` = (column, row) with the origin at the
lower-left corner; arrays are indexed ``[y, x]`` so row 0 is the bottom row.
Occupancy is stored bit-packed, 64 cells per word, alongside a birth-time
plane (0 for initially occupied sites, ``t`` for sites added at step ``t``,
:data:`NEVER` for empty sites).
"""

from __future__ import annotations

import enum
from typing import NamedTuple, TextIO

import numpy as np

from .zeroset import Rule

__all__ = [
    "NEVER",
    "Boundary",
    "Configuration",
    "CrossCounts",
    "TorusTooSmall",
    "random_configuration",
    "cross_counts",
    "dump",
    "dumps",
    "load",
    "loads",
]

NEVER = np.iinfo(np.int32).max
WORD = 64


class TorusTooSmall(ValueError):
    """Periodic box narrower than the cross neighborhood."""


class Boundary(str, enum.Enum):
    ZERO = "zero"
    PERIODIC = "periodic"

    def __str__(self):
        return self.value


class CrossCounts(NamedTuple):
    h_count: int
    v_count: int


def _nwords(width: int) -> int:
    return (width + WORD - 1) // WORD


class Configuration:
    """A rectangular occupancy grid with a boundary mode.

    ``bits`` holds packed occupancy (``uint64``, shape ``(height, nwords)``,
    bit ``i`` of word ``k`` is column ``64*k + i``) and ``birth`` the
    occupation times.  Mutate through :meth:`set` (or call :meth:`touch`
    after editing the arrays directly) so cached engine state is rebuilt.
    """

    def __init__(self, width: int, height: int, boundary=Boundary.ZERO):
        if width < 1 or height < 1:
            raise ValueError("box dimensions must be positive")
        boundary = Boundary(boundary)
        if boundary is Boundary.PERIODIC and width != height:
            raise ValueError("periodic boxes must be square")
        self.width = int(width)
        self.height = int(height)
        self.boundary = boundary
        self.bits = np.zeros((self.height, _nwords(self.width)), dtype=np.uint64)
        self.birth = np.full((self.height, self.width), NEVER, dtype=np.int32)
        self.time = 0
        self._version = 0
        self._engine = None

    # construction helpers

    @classmethod
    def from_array(cls, occupied, boundary=Boundary.ZERO, time: int = 0) -> "Configuration":
        """Build from a boolean ``[y, x]`` array; occupied cells get birth 0."""
        occ = np.asarray(occupied, dtype=bool)
        if occ.ndim != 2:
            raise ValueError("occupancy array must be 2-D")
        cfg = cls(occ.shape[1], occ.shape[0], boundary)
        cfg.birth[occ] = 0
        cfg.time = time
        cfg.sync_bits()
        return cfg

    def copy(self) -> "Configuration":
        other = Configuration(self.width, self.height, self.boundary)
        other.bits[...] = self.bits
        other.birth[...] = self.birth
        other.time = self.time
        return other

    def transposed(self) -> "Configuration":
        """Swap rows and columns (reflection in the main diagonal)."""
        other = Configuration(self.height, self.width, self.boundary)
        other.birth[...] = self.birth.T
        other.time = self.time
        other.sync_bits()
        return other

    # bookkeeping

    def touch(self):
        """Invalidate cached engine state after direct array edits."""
        self._version += 1

    def sync_bits(self):
        """Recompute the packed plane from the birth plane."""
        occ = self.birth != NEVER
        pad = self.bits.shape[1] * WORD - self.width
        if pad:
            occ = np.pad(occ, ((0, 0), (0, pad)))
        packed = np.packbits(occ, axis=1, bitorder="little")
        self.bits[...] = packed.view("<u8").astype(np.uint64, copy=False)
        self.touch()

    def _check(self, x: int, y: int):
        if not (0 <= x < self.width and 0 <= y < self.height):
            raise IndexError(f"cell {(x, y)} outside {self.width}x{self.height} box")

    # accessors

    def get(self, x: int, y: int) -> bool:
        self._check(x, y)
        return bool((int(self.bits[y, x // WORD]) >> (x % WORD)) & 1)

    def set(self, x: int, y: int, occupied: bool = True, birth: int = 0):
        """Occupy (or clear) a cell; used for initial conditions."""
        self._check(x, y)
        mask = np.uint64(1 << (x % WORD))
        if occupied:
            self.bits[y, x // WORD] |= mask
            self.birth[y, x] = birth
        else:
            self.bits[y, x // WORD] &= ~mask
            self.birth[y, x] = NEVER
        self.touch()

    def __getitem__(self, xy) -> bool:
        return self.get(*xy)

    def count_occupied(self) -> int:
        return int(np.bitwise_count(self.bits).sum())

    def density(self) -> float:
        return self.count_occupied() / (self.width * self.height)

    def occupied(self) -> np.ndarray:
        """Boolean ``[y, x]`` occupancy unpacked from the bit plane."""
        raw = self.bits.astype("<u8", copy=False).view(np.uint8)
        occ = np.unpackbits(raw, axis=1, bitorder="little")[:, : self.width]
        return occ.astype(bool)

    def is_full(self) -> bool:
        return self.count_occupied() == self.width * self.height

    def same_state(self, other: "Configuration") -> bool:
        return (
            self.width == other.width
            and self.height == other.height
            and np.array_equal(self.bits, other.bits)
            and np.array_equal(self.birth, other.birth)
        )

    def check_torus(self, rho: int):
        if self.boundary is Boundary.PERIODIC and self.width < 2 * rho + 1:
            raise TorusTooSmall(
                f"periodic box of side {self.width} needs side >= {2 * rho + 1} for rho={rho}"
            )

    def __repr__(self):
        return (
            f"Configuration({self.width}x{self.height}, {self.boundary.value}, "
            f"t={self.time}, occupied={self.count_occupied()})"
        )


def random_configuration(width: int, height: int, boundary, p: float, rng) -> Configuration:
    """I.i.d. Bernoulli(``p``) occupancy drawn from a numpy ``Generator``."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must be in [0, 1], got {p}")
    occ = rng.random((height, width)) < p
    return Configuration.from_array(occ, boundary)


def _popcount_range(row_bits: np.ndarray, lo: int, hi: int) -> int:
    """Occupied cells in columns ``lo..hi`` (inclusive) of one packed row."""
    total = 0
    k0, k1 = lo // WORD, hi // WORD
    for k in range(k0, k1 + 1):
        word = int(row_bits[k])
        a = lo - k * WORD if k == k0 else 0
        b = hi - k * WORD if k == k1 else WORD - 1
        mask = ((1 << (b - a + 1)) - 1) << a
        total += (word & mask).bit_count()
    return total


def _intervals(center: int, rho: int, n: int, periodic: bool):
    lo, hi = center - rho, center + rho
    if not periodic:
        return [(max(lo, 0), min(hi, n - 1))]
    if lo < 0:
        return [(lo + n, n - 1), (0, hi)]
    if hi >= n:
        return [(lo, n - 1), (0, hi - n)]
    return [(lo, hi)]


def cross_counts(config: Configuration, rule: Rule, x) -> CrossCounts:
    """Occupied sites on the horizontal and vertical arms through ``x``.

    Both arms include ``x`` itself.  Outside a zero-boundary box counts as
    empty; periodic boxes wrap.
    """
    cx, cy = x
    config._check(cx, cy)
    rho = rule.rho if isinstance(rule, Rule) else int(rule)
    config.check_torus(rho)
    periodic = config.boundary is Boundary.PERIODIC
    h = sum(
        _popcount_range(config.bits[cy], a, b)
        for a, b in _intervals(cx, rho, config.width, periodic)
    )
    v = 0
    word, shift = cx // WORD, cx % WORD
    for a, b in _intervals(cy, rho, config.height, periodic):
        for yy in range(a, b + 1):
            v += (int(config.bits[yy, word]) >> shift) & 1
    return CrossCounts(h, v)


# portable text dump


def dumps(config: Configuration) -> str:
    occ = config.occupied()
    lines = [f"{config.width} {config.height} {config.boundary.value.upper()}"]
    for y in range(config.height - 1, -1, -1):
        lines.append("".join("#" if c else "." for c in occ[y]))
    return "\n".join(lines) + "\n"


def dump(config: Configuration, fh: TextIO):
    fh.write(dumps(config))


def loads(text: str) -> Configuration:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty dump")
    try:
        w_s, h_s, b_s = lines[0].split()
        width, height = int(w_s), int(h_s)
    except ValueError:
        raise ValueError(f"bad dump header {lines[0]!r}") from None
    body = lines[1:]
    if len(body) != height:
        raise ValueError(f"expected {height} rows, found {len(body)}")
    occ = np.zeros((height, width), dtype=bool)
    for i, ln in enumerate(body):
        ln = ln.strip()
        if len(ln) != width or set(ln) - {".", "#"}:
            raise ValueError(f"bad dump row {i}: {ln!r}")
        occ[height - 1 - i] = np.frombuffer(ln.encode(), dtype=np.uint8) == ord("#")
    return Configuration.from_array(occ, b_s.lower())


def load(fh: TextIO) -> Configuration:
    return loads(fh.read())
