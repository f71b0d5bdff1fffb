import math
from fractions import Fraction as F

import numpy as np
import pytest

from ydgrow.theory import (
    DegenerateFit,
    PowerBounds,
    PowerKind,
    Unsupported,
    gamma_bootstrap,
    gamma_l_finite,
    gamma_l_infinite,
    gamma_line,
    gamma_perturbed_line,
    l_finite_equal_arm_bounds,
    l_finite_thin_arm_bounds,
    m_hat_bootstrap,
    m_hat_bootstrap_search,
    parametric_powers,
    power_fit,
    small_catalog,
)
from ydgrow.zeroset import ZeroSet, line

GAMMA = [F(1, 2), F(1), F(5, 3), F(7, 3), F(3), F(15, 4), F(9, 2), F(21, 4), F(6), F(34, 5),
         F(38, 5), F(42, 5), F(46, 5), F(10), F(65, 6), F(35, 3), F(25, 2), F(40, 3), F(85, 6),
         F(15)]
M_HAT = [0, 0, 1, 1, 1, 2, 2, 2, 2, 3, 3, 3, 3, 3, 4, 4, 4, 4, 4, 4]


@pytest.mark.parametrize("r", range(1, 21))
def test_bootstrap_table(r):
    g = gamma_bootstrap(r)
    assert g.value == GAMMA[r - 1] and isinstance(g.value, F)
    assert g.kind is PowerKind.PURE_CRITICAL
    assert m_hat_bootstrap(r) == M_HAT[r - 1]


def test_m_hat_characterizations_agree():
    for r in range(1, 10_001):
        assert m_hat_bootstrap(r) == m_hat_bootstrap_search(r)
    with pytest.raises(ValueError):
        m_hat_bootstrap(0)


def test_m_hat_against_float_ceiling():
    for r in range(1, 2000):
        assert m_hat_bootstrap(r) == math.ceil((math.sqrt(9 + 8 * r) - 5) / 2)


def test_gamma_line():
    assert gamma_line(2, 1).value == F(2, 3) and gamma_line(2, 1).kind is PowerKind.PURE_CRITICAL
    assert gamma_line(3, 2).value == F(4, 3) and gamma_line(3, 2).kind is PowerKind.CRITICAL
    g = gamma_line(2, 2)
    assert g.value == 1 and g.kind is PowerKind.CRITICAL and "log" in g.note
    with pytest.raises(ValueError):
        gamma_line(2, 3)
    assert gamma_perturbed_line(3, 3).value == 2


def test_gamma_l_finite_examples():
    g = gamma_l_finite(3, 1, 1)
    assert g.value == F(3, 2) and g.kind is PowerKind.PURE_CRITICAL
    g = gamma_l_finite(8, 2, 2)
    assert g.value == F(16, 3) and g.kind is PowerKind.PURE_CRITICAL and "double" in g.source
    b = gamma_l_finite(4, 1, 3)
    assert isinstance(b, PowerBounds)
    assert (b.lower.value, b.upper.value) == (F(9, 4), F(13, 5))
    assert b.lower.kind is PowerKind.LOWER_BOUND and b.upper.kind is PowerKind.UPPER_BOUND
    assert isinstance(gamma_l_finite(5, 3, 3), PowerBounds)
    with pytest.raises(Unsupported):
        gamma_l_finite(5, 2, 3)
    with pytest.raises(ValueError):
        gamma_l_finite(3, 3, 1)


def test_equal_arm_bounds_ordered():
    for r in range(2, 101):
        for s in range(1, r):
            b = l_finite_equal_arm_bounds(r, s)
            assert b.lower.value <= b.upper.value


def test_thin_arm_bounds_close():
    for r in range(2, 101):
        for s in range(1, r):
            if 2 * s > r:
                b = l_finite_thin_arm_bounds(r, s)
                assert 0 <= b.upper.value - b.lower.value <= F(1, 2)


def test_gamma_l_infinite():
    assert gamma_l_infinite(3, 2, 1).value == F(7, 3)
    assert gamma_l_infinite(2, 1, 1).value == F(3, 2)
    assert 3 - gamma_l_infinite(3, 10**6, 1).value < F(1, 10**5)
    for r in range(2, 101):
        for s2 in range(1, r):
            for s1 in (1, 2, 5, 50, 100):
                assert s2 < gamma_l_infinite(r, s1, s2).value < r
    with pytest.raises(ValueError):
        gamma_l_infinite(3, 0, 1)


def test_catalog_shape():
    cat = small_catalog()
    assert len(cat) == 15 and sum(e.fits_3x3 for e in cat) == 13
    assert len({e.zero_set for e in cat}) == 15
    by_rows = {e.zero_set.rows: e.powers for e in cat}
    assert by_rows[(1,)].value == F(1, 2)
    assert by_rows[(3, 2, 2)].value == F(5, 3)
    b = by_rows[(4, 2, 2)]
    assert (b.lower.value, b.upper.value) == (F(5, 3), F(2))
    b = by_rows[(4, 3, 3)]
    assert (b.lower.value, b.upper.value) == (F(2), F(9, 4))
    for e in cat:
        if isinstance(e.powers, PowerBounds):
            assert e.powers.lower.value <= e.powers.upper.value


def test_catalog_agrees_with_families():
    checked = 0
    for e in small_catalog():
        for _, res in parametric_powers(e.zero_set):
            checked += 1
            if isinstance(res, PowerBounds):
                assert res.lower.value <= e.powers.value <= res.upper.value
            else:
                assert res.value == e.powers.value
    assert checked >= 8
    assert dict(parametric_powers(line(3, 2)))["line"].value == F(4, 3)
    assert parametric_powers(ZeroSet((3, 3)))[0][1].value == F(4, 3)


def test_power_fit_exact_power_law():
    ps = [0.1, 0.05, 0.02, 0.01]
    fit = power_fit([(p, (1 / p) ** 1.5) for p in ps])
    assert fit.slope == pytest.approx(1.5, abs=1e-12)
    assert fit.intercept == pytest.approx(0.0, abs=1e-12)


def test_power_fit_log_correction_inflates_slope():
    ps = np.geomspace(1e-3, 1e-1, 12)
    fit = power_fit([(p, (1 / p) * math.log(1 / p)) for p in ps])
    assert 1.0 < fit.slope < 1.35


def test_power_fit_errors():
    with pytest.raises(DegenerateFit):
        power_fit([(0.1, 3.0), (0.1, 4.0), (0.1, 5.0)])
    with pytest.raises(ValueError):
        power_fit([(0.1, 3.0), (0.05, 4.0)])
    with pytest.raises(ValueError):
        power_fit([(0.1, 3.0), (0.05, 0.0), (0.02, 1.0)])
