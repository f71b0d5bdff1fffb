"""Pure-numpy update kernels, used when the compiled extension is absent.

Every function mutates its array arguments in place.

birth
    ``int32[H, W]`` occupation times, ``NEVER`` for empty cells.
bits
    ``uint64[H, ceil(W/64)]`` packed occupancy, kept in step with ``birth``.
hcnt, vcnt
    ``int16[H, W]`` occupied sites on the horizontal / vertical arm of each
    cell (center included).  Valid for the current occupancy on entry and on
    exit.
grow
    ``uint8[2*rho+2, 2*rho+2]``; ``grow[h, v]`` is nonzero when the pair
    ``(h, v)`` lies outside the zero-set.
t_new
    Birth time written into newly occupied cells.
last, out
    ``int32`` buffers of flat indices ``y*W + x``; ``last[:n_last]`` are the
    cells added by the previous step, ``out`` receives this step's additions.
"""

import numpy as np

NEVER = np.iinfo(np.int32).max


def _arm_cells(xs, ys, d, W, H, periodic, horizontal):
    if horizontal:
        xx = xs + d
        if periodic:
            return ys, xx % W
        keep = (xx >= 0) & (xx < W)
        return ys[keep], xx[keep]
    yy = ys + d
    if periodic:
        return yy % H, xs
    keep = (yy >= 0) & (yy < H)
    return yy[keep], xs[keep]


def _add_arms(hcnt, vcnt, ys, xs, rho, periodic):
    H, W = hcnt.shape
    for d in range(-rho, rho + 1):
        np.add.at(hcnt, _arm_cells(xs, ys, d, W, H, periodic, True), 1)
        np.add.at(vcnt, _arm_cells(xs, ys, d, W, H, periodic, False), 1)


def build_counts(birth, rho, periodic, hcnt, vcnt):
    hcnt[...] = 0
    vcnt[...] = 0
    ys, xs = np.nonzero(birth != NEVER)
    _add_arms(hcnt, vcnt, ys, xs, rho, periodic)


def _commit(birth, bits, hcnt, vcnt, flat, rho, periodic, t_new, out):
    H, W = birth.shape
    ys, xs = np.divmod(flat, W)
    birth[ys, xs] = t_new
    words = xs >> 6
    masks = np.left_shift(np.uint64(1), (xs & 63).astype(np.uint64))
    np.bitwise_or.at(bits, (ys, words), masks)
    _add_arms(hcnt, vcnt, ys, xs, rho, periodic)
    out[: flat.size] = flat
    return int(flat.size)


def step_full(birth, bits, hcnt, vcnt, grow, rho, periodic, t_new, out):
    hit = (birth == NEVER) & (grow[hcnt, vcnt] != 0)
    flat = np.flatnonzero(hit).astype(np.int32)
    return _commit(birth, bits, hcnt, vcnt, flat, rho, periodic, t_new, out)


def step_frontier(birth, bits, hcnt, vcnt, grow, rho, periodic, t_new, last, n_last, out):
    H, W = birth.shape
    ys, xs = np.divmod(last[:n_last].astype(np.int64), W)
    cand = []
    for d in range(-rho, rho + 1):
        for horizontal in (True, False):
            cy, cx = _arm_cells(xs, ys, d, W, H, periodic, horizontal)
            cand.append(cy * W + cx)
    if not cand:
        return 0
    flat = np.unique(np.concatenate(cand))
    cy, cx = np.divmod(flat, W)
    hit = (birth[cy, cx] == NEVER) & (grow[hcnt[cy, cx], vcnt[cy, cx]] != 0)
    flat = flat[hit].astype(np.int32)
    return _commit(birth, bits, hcnt, vcnt, flat, rho, periodic, t_new, out)
