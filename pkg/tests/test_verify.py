import numpy as np
import pytest

from ydgrow.engine import _commit_mask, arm_counts
from ydgrow.grid import NEVER, Boundary
from ydgrow.verify import SUITES, verify


def broken_window_step(config, rule):
    """Engine with an off-by-one arm length (counts rho + 1 cells each way)."""
    occ = config.birth != NEVER
    h, v = arm_counts(occ, rule.rho + 1, config.boundary is Boundary.PERIODIC)
    top = 2 * rule.rho + 1
    table = rule.growth_table()
    mask = ~occ & (table[np.minimum(h, top), np.minimum(v, top)] != 0)
    return _commit_mask(config, mask)


def test_all_suites_pass_small():
    report = verify(scale=0.03, seed=5)
    assert [r.name for r in report.results] == list(SUITES)
    assert report.ok, report.text()
    assert all(r.total > 0 for r in report.results)


def test_broken_window_fails_oracle():
    report = verify(["oracle-equivalence"], counts={"oracle-equivalence": 50}, stepper=broken_window_step)
    (res,) = report.results
    assert not res.ok and res.failures
    assert not report.ok
    assert "FAIL oracle-equivalence" in report.text()


def test_suite_filter():
    report = verify(["speed-of-light"], scale=0.02)
    assert [r.name for r in report.results] == ["speed-of-light"]
    with pytest.raises(KeyError):
        verify(["warp-drive"])


def test_report_line_format():
    (res,) = verify(["catalog"]).results
    assert res.line().startswith("PASS catalog") and f"{res.passed}/{res.total}" in res.line()
