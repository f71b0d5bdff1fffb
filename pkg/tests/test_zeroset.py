import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ydgrow.zeroset import (
    INF,
    HeightExceedsRange,
    Inconsistent,
    InfiniteWidth,
    NonMonotone,
    Rule,
    WidthExceedsRange,
    ZeroSet,
    ZeroSetError,
    bootstrap,
    contains,
    format_zeroset,
    from_minimal_counts,
    from_row_widths,
    l_finite,
    l_infinite,
    line,
    minimal_counts,
    normalize,
    parse_zeroset,
    perturbed_line,
    transpose,
    validate_rule,
    zeroset_from_json,
    zeroset_to_json,
)


def zerosets(max_h=8, max_w=8, finite=False):
    width = st.integers(1, max_w) if finite else st.one_of(st.integers(1, max_w), st.just(INF))
    return st.lists(width, max_size=max_h).map(
        lambda ws: ZeroSet(tuple(sorted(ws, reverse=True)))
    )


def cells_of(z):
    """Brute-force cell set of a finite zero-set."""
    return {(u, v) for v, w in enumerate(z.rows) for u in range(w)}


def brute_minimal_counts(z, box=12):
    big = box + 5
    inside = lambda u, v: v < z.height and (z.rows[v] is INF or u < z.rows[v])
    out = set()
    for u in range(big):
        for v in range(big):
            if inside(u, v):
                continue
            left = u == 0 or inside(u - 1, v)
            down = v == 0 or inside(u, v - 1)
            if left and down:
                out.add((u, v))
    return out


def test_from_row_widths_examples():
    assert from_row_widths([3, 2, 1]) == bootstrap(3)
    assert from_row_widths([3, 2, 1]).height == 3
    assert from_row_widths([]).height == 0
    assert from_row_widths([]).is_empty
    with pytest.raises(NonMonotone):
        from_row_widths([2, 3])


def test_trailing_zero_rows_dropped():
    assert ZeroSet((2, 1, 0, 0)).rows == (2, 1)


def test_inf_ordering_and_no_arithmetic():
    assert INF > 10**9 and not INF < 5 and INF == INF
    with pytest.raises(TypeError):
        INF + 1
    with pytest.raises(NonMonotone):
        from_row_widths([2, INF])


def test_minimal_counts_examples():
    assert minimal_counts(bootstrap(3)) == {(3, 0), (2, 1), (1, 2), (0, 3)}
    assert minimal_counts(line(3, 2)) == {(3, 0), (0, 2)}
    assert minimal_counts(ZeroSet((INF, 2))) == {(2, 1), (0, 2)}
    assert minimal_counts(ZeroSet(())) == {(0, 0)}


def test_from_minimal_counts_examples():
    assert from_minimal_counts({(0, 3), (3, 0)}) == ZeroSet((3, 3, 3))
    assert from_minimal_counts({(0, 3), (1, 1), (3, 0)}) == ZeroSet((3, 1, 1))
    assert from_minimal_counts({(0, 3), (2, 1)}) == ZeroSet((INF, 2, 2))


@pytest.mark.parametrize(
    "counts",
    [set(), {(1, 1)}, {(0, 2), (0, 3)}, {(2, 0), (3, 0), (0, 1)}, {(0, 3), (1, 1), (2, 2)}],
)
def test_from_minimal_counts_rejects(counts):
    with pytest.raises(Inconsistent):
        from_minimal_counts(counts)


@given(zerosets())
def test_minimal_counts_match_brute_force(z):
    assert minimal_counts(z) == brute_minimal_counts(z)


@given(zerosets().filter(lambda z: not z.is_empty))
def test_minimal_counts_round_trip(z):
    assert from_minimal_counts(minimal_counts(z)) == z


def test_contains_examples():
    assert contains(bootstrap(2), 1, 0)
    assert not contains(bootstrap(2), 1, 1)
    assert contains(ZeroSet((INF, 2)), 10**6, 0)
    assert (0, 0) in bootstrap(1)
    with pytest.raises(ValueError):
        contains(bootstrap(2), -1, 0)


@given(zerosets(), st.integers(0, 10), st.integers(0, 10), st.integers(0, 10), st.integers(0, 10))
def test_contains_downward_closed(z, u, v, du, dv):
    if contains(z, u + du, v + dv):
        assert contains(z, u, v)


@pytest.mark.parametrize("r", range(1, 11))
def test_bootstrap_is_triangle(r):
    z = bootstrap(r)
    for u in range(r + 3):
        for v in range(r + 3):
            assert contains(z, u, v) == (u + v <= r - 1)


def test_normalize_examples():
    assert normalize(ZeroSet((5, 2)), 3) == ZeroSet((INF, 2))
    assert normalize(bootstrap(3), 3) == bootstrap(3)
    with pytest.raises(HeightExceedsRange):
        normalize(ZeroSet((2, 2)), 1)


@given(zerosets(max_h=5), st.integers(5, 8))
def test_normalize_idempotent(z, rho):
    once = normalize(z, rho)
    assert normalize(once, rho) == once
    assert all(w is INF or w <= rho for w in once.rows)


def test_transpose_examples():
    assert transpose(ZeroSet((3, 1, 1))) == ZeroSet((3, 1, 1))
    assert transpose(ZeroSet((2, 2))) == ZeroSet((2, 2))
    assert transpose(ZeroSet((3, 2, 2))) == ZeroSet((3, 3, 1))
    with pytest.raises(InfiniteWidth):
        transpose(ZeroSet((INF, 1)))


@given(zerosets(finite=True))
def test_transpose_matches_cell_reflection(z):
    assert cells_of(transpose(z)) == {(v, u) for u, v in cells_of(z)}
    assert transpose(transpose(z)) == z


def test_named_constructors():
    assert bootstrap(3).rows == (3, 2, 1)
    assert line(3, 2).rows == (3, 3)
    assert perturbed_line(3, 3).rows == (3, 3, 2)
    assert l_finite(3, 1, 2).rows == (3, 3, 1)
    assert l_finite(3, 1, 1).rows == (3, 1, 1)
    assert l_infinite(3, 2, 1).rows == (INF, 2, 2)
    for bad in [lambda: bootstrap(0), lambda: line(2, 3), lambda: perturbed_line(3, 1),
                lambda: l_finite(3, 3, 1), lambda: l_infinite(3, 1, 3)]:
        with pytest.raises(ValueError):
            bad()


def test_l_finite_minimal_counts():
    assert minimal_counts(l_finite(5, 2, 3)) == {(0, 5), (2, 3), (5, 0)}
    assert minimal_counts(l_infinite(5, 2, 3)) == {(0, 5), (2, 3)}


def test_validate_rule_examples():
    assert validate_rule(bootstrap(3), 3).rho == 3
    assert validate_rule(line(2, 2), 2).zero_set == line(2, 2)
    with pytest.raises(HeightExceedsRange):
        validate_rule(line(3, 3), 2)
    assert validate_rule(ZeroSet((5, 2)), 3).zero_set == ZeroSet((INF, 2))
    with pytest.raises(WidthExceedsRange):
        validate_rule(ZeroSet((5, 2)), 3, strict=True)
    with pytest.raises(ZeroSetError):
        Rule(bootstrap(2), 0)


def test_growth_table():
    t = validate_rule(bootstrap(2), 2).growth_table()
    assert t.shape == (6, 6)
    assert t[0, 0] == 0 and t[1, 0] == 0 and t[0, 1] == 0 and t[1, 1] == 1 and t[2, 0] == 1


def test_text_and_json_formats():
    z = ZeroSet((INF, 2, 2))
    assert format_zeroset(z) == "inf 2 2"
    assert parse_zeroset("inf 2 2") == z
    assert parse_zeroset("3 2 1") == bootstrap(3)
    assert json.loads(zeroset_to_json(z)) == {"rows": ["inf", 2, 2]}
    assert zeroset_from_json('{"rows":[3,2,1]}') == bootstrap(3)
    with pytest.raises(NonMonotone):
        parse_zeroset("1 2")
    with pytest.raises(ZeroSetError):
        parse_zeroset("3 x")
    with pytest.raises(ZeroSetError):
        zeroset_from_json("[1,2]")


@given(zerosets())
def test_format_round_trip(z):
    assert parse_zeroset(format_zeroset(z)) == z
    assert zeroset_from_json(zeroset_to_json(z)) == z
