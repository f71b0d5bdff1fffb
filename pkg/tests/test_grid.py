import io

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from ydgrow.grid import (
    NEVER,
    Boundary,
    Configuration,
    TorusTooSmall,
    cross_counts,
    dump,
    dumps,
    load,
    loads,
    random_configuration,
)


def brute_counts(occ, x, y, rho, periodic):
    H, W = occ.shape
    h = v = 0
    for d in range(-rho, rho + 1):
        xx, yy = x + d, y + d
        if periodic:
            h += occ[y, xx % W]
            v += occ[yy % H, x]
        else:
            h += 0 <= xx < W and occ[y, xx]
            v += 0 <= yy < H and occ[yy, x]
    return int(h), int(v)


def test_random_configuration_extremes():
    rng = np.random.default_rng(0)
    assert random_configuration(8, 8, "zero", 0.0, rng).count_occupied() == 0
    assert random_configuration(8, 8, "zero", 1.0, rng).is_full()
    c = random_configuration(256, 256, "zero", 0.5, rng)
    n = 256 * 256
    assert abs(c.count_occupied() - n / 2) <= 3 * np.sqrt(n * 0.25)
    assert (c.birth[c.occupied()] == 0).all()


def test_cross_counts_examples():
    c = Configuration(11, 11)
    c.set(5, 5)
    assert cross_counts(c, 2, (6, 5)) == (1, 0)
    assert cross_counts(c, 2, (5, 5)) == (1, 1)
    full = Configuration.from_array(np.ones((5, 5), bool))
    assert cross_counts(full, 2, (0, 0)) == (3, 3)


def test_torus_too_small():
    c = Configuration(4, 4, Boundary.PERIODIC)
    with pytest.raises(TorusTooSmall):
        cross_counts(c, 2, (0, 0))
    with pytest.raises(ValueError):
        Configuration(4, 5, Boundary.PERIODIC)


@given(
    st.integers(1, 5),
    st.integers(1, 140),
    st.integers(1, 20),
    st.booleans(),
    st.integers(0, 2**32 - 1),
)
def test_cross_counts_match_scan(rho, w, h, periodic, seed):
    if periodic:
        w = h = max(w % 40, 2 * rho + 1)
    rng = np.random.default_rng(seed)
    occ = rng.random((h, w)) < rng.random()
    c = Configuration.from_array(occ, "periodic" if periodic else "zero")
    for _ in range(10):
        x, y = int(rng.integers(w)), int(rng.integers(h))
        assert cross_counts(c, rho, (x, y)) == brute_counts(occ, x, y, rho, periodic)


@given(st.integers(1, 4), st.integers(0, 2**32 - 1), st.integers(-20, 20), st.integers(-20, 20))
def test_periodic_counts_translate(rho, seed, dx, dy):
    n = 2 * rho + 1 + seed % 13
    occ = np.random.default_rng(seed).random((n, n)) < 0.3
    a = Configuration.from_array(occ, "periodic")
    b = Configuration.from_array(np.roll(occ, (dy, dx), axis=(0, 1)), "periodic")
    for y in range(0, n, 3):
        for x in range(0, n, 3):
            assert cross_counts(a, rho, (x, y)) == cross_counts(b, rho, ((x + dx) % n, (y + dy) % n))


def test_zero_and_periodic_agree_away_from_edges():
    rho, n = 3, 30
    occ = np.zeros((n, n), bool)
    occ[rho : n - rho, rho : n - rho] = np.random.default_rng(4).random((n - 2 * rho, n - 2 * rho)) < 0.4
    z, p = Configuration.from_array(occ), Configuration.from_array(occ, "periodic")
    for y in range(n):
        for x in range(n):
            assert cross_counts(z, rho, (x, y)) == cross_counts(p, rho, (x, y))


def test_accessors():
    c = Configuration(4, 4)
    assert c.density() == 0
    c.set(1, 2)
    assert c.count_occupied() == 1 and c.get(1, 2) and c[1, 2] and not c.get(2, 1)
    assert c.birth[2, 1] == 0
    c.set(1, 2, False)
    assert c.count_occupied() == 0 and c.birth[2, 1] == NEVER
    full = Configuration.from_array(np.ones((4, 4), bool))
    assert full.density() == 1 and full.is_full()
    with pytest.raises(IndexError):
        c.get(4, 0)


@given(arrays(np.bool_, st.tuples(st.integers(1, 20), st.integers(1, 150))))
def test_bits_and_birth_agree(occ):
    c = Configuration.from_array(occ)
    assert np.array_equal(c.occupied(), occ)
    assert np.array_equal(c.birth != NEVER, occ)
    assert c.count_occupied() == int(occ.sum())


@given(arrays(np.bool_, st.tuples(st.integers(1, 12), st.integers(1, 70))), st.booleans())
def test_dump_round_trip(occ, periodic):
    if periodic:
        occ = occ[: min(occ.shape), : min(occ.shape)]
    c = Configuration.from_array(occ, "periodic" if periodic else "zero")
    back = loads(dumps(c))
    assert back.boundary == c.boundary
    assert np.array_equal(back.bits, c.bits)
    buf = io.StringIO()
    dump(c, buf)
    buf.seek(0)
    assert np.array_equal(load(buf).occupied(), occ)


def test_dump_layout():
    c = Configuration(3, 2)
    c.set(0, 0)
    assert dumps(c) == "3 2 ZERO\n...\n#..\n"
    for bad in ["", "3 2\n...\n...\n", "3 2 ZERO\n...\n", "2 1 ZERO\n.x\n"]:
        with pytest.raises(ValueError):
            loads(bad)


def test_transposed():
    occ = np.random.default_rng(1).random((5, 9)) < 0.5
    t = Configuration.from_array(occ).transposed()
    assert (t.width, t.height) == (5, 9)
    assert np.array_equal(t.occupied(), occ.T)
