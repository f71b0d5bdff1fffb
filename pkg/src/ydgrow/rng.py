"""Seeding and site-addressable random fields.

Trial ``i`` of a run with master seed ``m`` uses ``splitmix64(m ^ i)``.
The initial configuration of a trial is a function of (seed, site) only, so
any box cut out of the plane sees the same values wherever it sits and
whichever thread draws it.
"""

from __future__ import annotations

import numpy as np

__all__ = ["MASK64", "splitmix64", "trial_seed", "uniform_field", "bernoulli_field"]

MASK64 = (1 << 64) - 1

_GAMMA = 0x9E3779B97F4A7C15
_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB
_BLOCK = 256  # rows per chunk, bounds temporary memory


def splitmix64(x: int) -> int:
    """One output of the SplitMix64 generator started at state ``x``."""
    z = (x + _GAMMA) & MASK64
    z = ((z ^ (z >> 30)) * _M1) & MASK64
    z = ((z ^ (z >> 27)) * _M2) & MASK64
    return z ^ (z >> 31)


def trial_seed(master_seed: int, trial: int) -> int:
    return splitmix64((master_seed ^ trial) & MASK64)


def _splitmix64_array(x: np.ndarray) -> np.ndarray:
    z = x + np.uint64(_GAMMA)
    z = (z ^ (z >> np.uint64(30))) * np.uint64(_M1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(_M2)
    return z ^ (z >> np.uint64(31))


def uniform_field(seed: int, x0: int, y0: int, width: int, height: int) -> np.ndarray:
    """Uniform [0, 1) values for sites ``(x0+i, y0+j)`` as a ``[j, i]`` array."""
    xs = (np.arange(x0, x0 + width, dtype=np.int64) & 0xFFFFFFFF).astype(np.uint64)
    ys = (np.arange(y0, y0 + height, dtype=np.int64) & 0xFFFFFFFF).astype(np.uint64)
    key = (xs[None, :] << np.uint64(32)) | ys[:, None]
    mixed = _splitmix64_array(_splitmix64_array(key) ^ np.uint64(splitmix64(seed & MASK64)))
    return (mixed >> np.uint64(11)).astype(np.float64) * (1.0 / (1 << 53))


def bernoulli_field(seed: int, p: float, x0: int, y0: int, width: int, height: int) -> np.ndarray:
    """Occupancy ``uniform_field(...) < p``; coupled across ``p`` for a fixed seed."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must be in [0, 1], got {p}")
    if p >= 1.0:
        return np.ones((height, width), dtype=bool)
    out = np.empty((height, width), dtype=bool)
    for j in range(0, height, _BLOCK):
        rows = min(_BLOCK, height - j)
        out[j : j + rows] = uniform_field(seed, x0, y0 + j, width, rows) < p
    return out
