"""Binary PPM snapshots of a configuration.

Initially occupied cells are black, empty cells white, and a cell born at
step ``t > 0`` gets the grey level ``64 + 160 * ((t - 1) % k) // (k - 1)``,
cycling with period ``k``.  Row ``height - 1`` is the top line of the image.
"""

from __future__ import annotations

import numpy as np

from .grid import NEVER, Configuration

__all__ = ["DEFAULT_SHADE_PERIOD", "snapshot_rgb", "render_snapshot", "write_ppm", "read_ppm"]

DEFAULT_SHADE_PERIOD = 8


def snapshot_rgb(config: Configuration, shade_period: int = DEFAULT_SHADE_PERIOD) -> np.ndarray:
    """``uint8[height, width, 3]`` image, already flipped for display."""
    if shade_period < 1:
        raise ValueError("shade_period must be >= 1")
    birth = config.birth.astype(np.int64)
    grey = np.full(birth.shape, 255, dtype=np.uint8)
    grey[birth == 0] = 0
    later = (birth > 0) & (birth != NEVER)
    if shade_period == 1:
        grey[later] = 64
    else:
        phase = (birth[later] - 1) % shade_period
        grey[later] = (64 + 160 * phase // (shade_period - 1)).astype(np.uint8)
    return np.repeat(grey[::-1, :, None], 3, axis=2)


def render_snapshot(config: Configuration, shade_period: int = DEFAULT_SHADE_PERIOD) -> bytes:
    """Encode the snapshot as a P6 PPM."""
    rgb = snapshot_rgb(config, shade_period)
    header = f"P6\n{config.width} {config.height}\n255\n".encode("ascii")
    return header + np.ascontiguousarray(rgb).tobytes()


def write_ppm(path, config: Configuration, shade_period: int = DEFAULT_SHADE_PERIOD):
    with open(path, "wb") as fh:
        fh.write(render_snapshot(config, shade_period))


def read_ppm(data: bytes) -> np.ndarray:
    """Decode a P6 PPM written by :func:`render_snapshot` into ``[h, w, 3]``."""
    parts = data.split(b"\n", 3)
    if len(parts) < 4 or parts[0] != b"P6":
        raise ValueError("not a binary PPM")
    w, h = (int(v) for v in parts[1].split())
    if int(parts[2]) != 255:
        raise ValueError("only maxval 255 is supported")
    pix = np.frombuffer(parts[3], dtype=np.uint8)
    if pix.size != w * h * 3:
        raise ValueError("truncated pixel data")
    return pix.reshape(h, w, 3)
