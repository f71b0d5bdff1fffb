# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled update kernels.

Same contract as :mod:`ydgrow._fallback`; see that module for the meaning of
each argument.  All loops release the GIL so independent trials can run on
separate threads.
"""

from libc.stdint cimport int16_t, int32_t, uint8_t, uint64_t

cdef enum:
    NEVER = 2147483647


cdef inline int _wrap(int i, int n) noexcept nogil:
    if i < 0:
        return i + n
    if i >= n:
        return i - n
    return i


cdef inline void _add_arms(int16_t[:, ::1] hcnt, int16_t[:, ::1] vcnt,
                           int x, int y, int W, int H, int rho, bint periodic) noexcept nogil:
    cdef int d, lo, hi
    if periodic:
        for d in range(-rho, rho + 1):
            hcnt[y, _wrap(x + d, W)] += 1
            vcnt[_wrap(y + d, H), x] += 1
    else:
        lo = x - rho if x - rho > 0 else 0
        hi = x + rho if x + rho < W - 1 else W - 1
        for d in range(lo, hi + 1):
            hcnt[y, d] += 1
        lo = y - rho if y - rho > 0 else 0
        hi = y + rho if y + rho < H - 1 else H - 1
        for d in range(lo, hi + 1):
            vcnt[d, x] += 1


def build_counts(int32_t[:, ::1] birth, int rho, bint periodic,
                 int16_t[:, ::1] hcnt, int16_t[:, ::1] vcnt):
    """Fill the arm-count planes from scratch with sliding windows."""
    cdef int H = birth.shape[0], W = birth.shape[1]
    cdef int x, y
    with nogil:
        for y in range(H):
            for x in range(W):
                hcnt[y, x] = 0
                vcnt[y, x] = 0
        for y in range(H):
            for x in range(W):
                if birth[y, x] != NEVER:
                    _add_arms(hcnt, vcnt, x, y, W, H, rho, periodic)
    return None


cdef inline int _try(int32_t[:, ::1] birth, int16_t[:, ::1] hcnt, int16_t[:, ::1] vcnt,
                     uint8_t[:, ::1] grow, int x, int y, int t_new,
                     int32_t[::1] out, int n_out, int W) noexcept nogil:
    if birth[y, x] == NEVER and grow[hcnt[y, x], vcnt[y, x]]:
        # marking birth now dedups candidates; counts stay at pre-step values
        birth[y, x] = t_new
        out[n_out] = y * W + x
        return n_out + 1
    return n_out


cdef void _apply(uint64_t[:, ::1] bits, int16_t[:, ::1] hcnt, int16_t[:, ::1] vcnt,
                 int32_t[::1] out, int n_out, int W, int H, int rho, bint periodic) noexcept nogil:
    cdef int i, x, y
    for i in range(n_out):
        y = out[i] // W
        x = out[i] - y * W
        bits[y, x >> 6] |= (<uint64_t>1) << (x & 63)
        _add_arms(hcnt, vcnt, x, y, W, H, rho, periodic)


def step_full(int32_t[:, ::1] birth, uint64_t[:, ::1] bits,
              int16_t[:, ::1] hcnt, int16_t[:, ::1] vcnt, uint8_t[:, ::1] grow,
              int rho, bint periodic, int t_new, int32_t[::1] out):
    """Synchronous step testing every empty cell; returns cells added."""
    cdef int H = birth.shape[0], W = birth.shape[1]
    cdef int x, y, n_out = 0
    with nogil:
        for y in range(H):
            for x in range(W):
                n_out = _try(birth, hcnt, vcnt, grow, x, y, t_new, out, n_out, W)
        _apply(bits, hcnt, vcnt, out, n_out, W, H, rho, periodic)
    return n_out


def step_frontier(int32_t[:, ::1] birth, uint64_t[:, ::1] bits,
                  int16_t[:, ::1] hcnt, int16_t[:, ::1] vcnt, uint8_t[:, ::1] grow,
                  int rho, bint periodic, int t_new,
                  int32_t[::1] last, int n_last, int32_t[::1] out):
    """Synchronous step testing only cells on the arms of ``last``."""
    cdef int H = birth.shape[0], W = birth.shape[1]
    cdef int i, x, y, d, lo, hi, n_out = 0
    with nogil:
        for i in range(n_last):
            y = last[i] // W
            x = last[i] - y * W
            if periodic:
                for d in range(-rho, rho + 1):
                    n_out = _try(birth, hcnt, vcnt, grow, _wrap(x + d, W), y, t_new, out, n_out, W)
                    n_out = _try(birth, hcnt, vcnt, grow, x, _wrap(y + d, H), t_new, out, n_out, W)
            else:
                lo = x - rho if x - rho > 0 else 0
                hi = x + rho if x + rho < W - 1 else W - 1
                for d in range(lo, hi + 1):
                    n_out = _try(birth, hcnt, vcnt, grow, d, y, t_new, out, n_out, W)
                lo = y - rho if y - rho > 0 else 0
                hi = y + rho if y + rho < H - 1 else H - 1
                for d in range(lo, hi + 1):
                    n_out = _try(birth, hcnt, vcnt, grow, x, d, t_new, out, n_out, W)
        _apply(bits, hcnt, vcnt, out, n_out, W, H, rho, periodic)
    return n_out
