import numpy as np
from hypothesis import given
from hypothesis import strategies as st

from ydgrow.rng import MASK64, bernoulli_field, splitmix64, trial_seed, uniform_field


def test_splitmix64_reference_values():
    # first outputs of the reference generator seeded with 0
    assert splitmix64(0) == 0xE220A8397B1DCDAF
    state = 0
    outs = []
    for _ in range(3):
        outs.append(splitmix64(state))
        state = (state + 0x9E3779B97F4A7C15) & MASK64
    assert outs == [0xE220A8397B1DCDAF, 0x6E789E6AA1B965F4, 0x06C45D188009454F]


def test_trial_seed_definition():
    assert trial_seed(12345, 7) == splitmix64(12345 ^ 7)


@given(st.integers(0, MASK64), st.integers(-50, 50), st.integers(-50, 50),
       st.integers(0, 10), st.integers(0, 10))
def test_field_is_site_addressable(seed, x0, y0, dx, dy):
    big = uniform_field(seed, x0, y0, 20, 20)
    sub = uniform_field(seed, x0 + dx, y0 + dy, 5, 5)
    assert np.array_equal(big[dy : dy + 5, dx : dx + 5], sub)


def test_bernoulli_coupling_and_range():
    lo = bernoulli_field(9, 0.1, -300, -300, 600, 600)
    hi = bernoulli_field(9, 0.3, -300, -300, 600, 600)
    assert not (lo & ~hi).any()
    assert abs(hi.mean() - 0.3) < 0.01
    assert bernoulli_field(9, 1.0, 0, 0, 3, 3).all()
    assert not bernoulli_field(9, 0.0, 0, 0, 3, 3).any()
    u = uniform_field(1, 0, 0, 100, 100)
    assert u.min() >= 0 and u.max() < 1
