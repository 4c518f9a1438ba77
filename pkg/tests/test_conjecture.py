from fractions import Fraction

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from huffbound.conjecture import (DyadicAnchorCode, anchor_codes,
                                  anchor_value, anchor_witness, check_grid,
                                  conjecture_case, conjecture_value,
                                  evaluate_point, grid, neg_log_bounds,
                                  tree_from_depths, write_mismatches)
from huffbound.exactnum import to_decimal
from huffbound.huffman import kraft_sum, leaves
from huffbound.optimize import code_value
from huffbound.prune import r_min_star
from huffbound.source import SubSource

F = Fraction


def single(p):
    return r_min_star(SubSource.from_probabilities([p])).value


def test_neg_log_bounds():
    assert neg_log_bounds(F(1, 4)) == (2, 2)
    assert neg_log_bounds(F(1, 3)) == (1, 2)
    assert neg_log_bounds(F(49, 100)) == (1, 2)
    assert neg_log_bounds(F(1, 100)) == (6, 7)


def test_anchor_code_shape():
    c = DyadicAnchorCode(2, 3)
    depth = dict(leaves(c.tree))
    assert depth["x1"] == 2 and depth["x2"] == 3
    assert sum(F(1, 2 ** d) for d in c.unknown_depths()) == c.spare
    assert kraft_sum(c.tree) == 1
    with pytest.raises(ValueError):
        DyadicAnchorCode(1, 1)
    with pytest.raises(ValueError):
        tree_from_depths([("a", 1), ("b", 2)])


def test_anchor_family_size():
    assert len(anchor_codes(F(1, 3), F(1, 5))) == 4
    assert len(anchor_codes(F(1, 4), F(1, 8))) == 1
    # (1, 1) is never a member
    assert all((c.a, c.b) != (1, 1) for c in anchor_codes(F(2, 5), F(2, 5)))


def test_examples():
    assert conjecture_case(F(1, 2), F(1, 2)) == "a"
    assert conjecture_value(F(1, 2), F(1, 2)) == 0
    assert conjecture_case(F(7, 10), F(1, 10)) == "b"
    assert conjecture_value(F(7, 10), F(1, 10)) == (
        single(F(7, 10)) + F(3, 10) * single(F(1, 3)))
    v = conjecture_value(F(49, 100), F(1, 2))
    assert to_decimal(v, 4) == "0.4293"
    assert evaluate_point((F(49, 100), F(1, 2))).agrees
    p = evaluate_point((F(1, 4), F(1, 8)))
    assert p.agrees and p.engine == 0
    with pytest.raises(ValueError):
        conjecture_value(F(3, 5), F(3, 5))


def test_anchor_formula_matches_code_value():
    p1, p2 = F(1, 5), F(1, 7)
    x = SubSource.from_probabilities([p1, p2])
    for c in anchor_codes(p1, p2):
        assert anchor_value(p1, p2, c) == code_value(x, c.tree)[0]


@given(st.integers(2, 6), st.integers(2, 6))
def test_dyadic_anchor_is_zero(a, b):
    p1, p2 = F(1, 2 ** a), F(1, 2 ** b)
    assume(p1 + p2 < 1)
    assert conjecture_value(p1, p2) == 0
    code = DyadicAnchorCode(a, b)
    witness = anchor_witness(p1, p2, code)
    depth = dict(leaves(code.tree))
    assert all(p == F(1, 2 ** depth[y]) for y, p in witness.items())


@settings(max_examples=25)
@given(st.integers(0, 19), st.integers(1, 19))
def test_major_symbol_decomposition(i, j):
    major, minor = F(20 + i, 40), F(j, 40)
    assume(major + minor < 1)
    engine = r_min_star(SubSource.from_probabilities([major, minor])).value
    assert engine == single(major) + (1 - major) * single(minor / (1 - major))


def test_grid_points():
    pts = grid(F(1, 4))
    assert pts == [(F(1, 4), F(1, 4)), (F(1, 4), F(1, 2)), (F(1, 4), F(3, 4)),
                   (F(1, 2), F(1, 4)), (F(1, 2), F(1, 2)), (F(3, 4), F(1, 4))]
    with pytest.raises(ValueError):
        grid(F(0))


def test_coarse_grid_and_report(tmp_path):
    bad, n = check_grid(F(1, 10))
    assert n == 45 and bad == []
    out = tmp_path / "m.csv"
    write_mismatches(out, bad)
    assert out.read_text() == ""
