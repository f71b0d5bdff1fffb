import numpy as np
import pytest

from ydgrow import seeds
from ydgrow.engine import is_inert
from ydgrow.grid import NEVER
from ydgrow.zeroset import bootstrap, line, validate_rule


def occ(c):
    return c.birth != NEVER


def test_packed_strip_layout():
    c = seeds.packed_strip(validate_rule(bootstrap(3), 3), 16)
    o = occ(c)
    assert [int(o[y].sum()) for y in range(4)] == [3, 2, 1, 0]
    for y, k in enumerate([3, 2, 1]):
        assert o[y, :k].all()
    assert o.sum() == 6 and (c.birth[o] == 0).all()


def test_packed_strip_too_large():
    with pytest.raises(seeds.PatternTooLarge):
        seeds.packed_strip(bootstrap(4), 3)


def test_lines():
    c = seeds.filled_adjacent_lines(3, "vertical", 10, offset=2)
    assert occ(c)[:, 2:5].all() and occ(c).sum() == 30
    c = seeds.parallel_lines(3, 3, "horizontal", 10, offset=1)
    assert [y for y in range(10) if occ(c)[y].all()] == [1, 4, 7]
    with pytest.raises(seeds.PatternTooLarge):
        seeds.parallel_lines(4, 3, "horizontal", 10, offset=1)
    with pytest.raises(ValueError):
        seeds.filled_adjacent_lines(1, "diagonal", 10)


def test_single_line_inert_under_line_growth():
    assert is_inert(seeds.parallel_lines(1, 1, "horizontal", 16), validate_rule(line(2, 2), 2))


def test_diagonal_nucleus():
    c = seeds.diagonal_nucleus(3)
    assert c.width == 9
    assert [tuple(p) for p in np.argwhere(occ(c))] == [(3, 3), (4, 4), (5, 5)]
    with pytest.raises(seeds.PatternTooLarge):
        seeds.diagonal_nucleus(4, 3)


def test_vertical_interval():
    c = seeds.vertical_interval(3, 11, x=4, y=2)
    assert occ(c)[2:5, 4].all() and occ(c).sum() == 3
