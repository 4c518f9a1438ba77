from fractions import Fraction

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from huffbound.exactnum import log2_of_rational
from huffbound.feasibility import build_system, check
from huffbound.huffman import Leaf, Node, kraft_sum, leaves
from huffbound.optimize import r_min_star_oracle, threshold
from huffbound.prune import (AffineProb, h_a, h_b, initial_state, is_code,
                             less_equal, merge_known_conditions, r_min_star,
                             run_algorithm3, unknown)
from huffbound.source import SubSource

F = Fraction


@st.composite
def oracle_sized(draw, max_t=6):
    m = draw(st.integers(1, 3))
    probs = [F(draw(st.integers(1, 9)), draw(st.integers(2, 15))) for _ in range(m)]
    assume(all(p < 1 for p in probs) and sum(probs) <= 1)
    x = SubSource.from_probabilities(probs)
    assume(not (len(x) == 1 and x.total == 1))
    assume(threshold(x) <= max_t)
    return x


def test_initial_state():
    x = SubSource.from_probabilities([F(2, 5)])
    s = initial_state(x)
    assert s.known == ((Leaf("x1"), AffineProb(F(2, 5))),)
    assert s.s == 0 and len(s.constraints) == 1
    two = initial_state(SubSource.from_probabilities([F(2, 5), F(2, 5)]))
    assert len(two.known) == 2
    with pytest.raises(ValueError):
        initial_state(SubSource())
    with pytest.raises(ValueError):
        initial_state(SubSource([("u3", F(1, 2))]))


def test_h_a_example():
    st0 = initial_state(SubSource.from_probabilities([F(2, 5), F(2, 5)]))
    nxt = h_a(st0, 0, 1)
    assert str(nxt.tree) == "[x1,x2]"
    assert nxt.known[0][1] == AffineProb(F(4, 5))
    want = less_equal(AffineProb(F(2, 5)), unknown(0))
    assert want in nxt.constraints
    with pytest.raises(IndexError):
        h_a(st0, 1, 1)


def test_condition_counts():
    x = SubSource.from_probabilities([F(1, 5), F(1, 6), F(1, 7), F(1, 8)])
    st0 = initial_state(x)
    for i in range(4):
        for j in range(i + 1, 4):
            pairs = merge_known_conditions(st0, i, j)
            assert len(pairs) == 2 * (len(st0.known) - 2) + 2
            others = {id(st0.known[l][1]) for l in (i, j)}
            assert all(not (a is b) for a, b in pairs)
            assert others


def test_h_b_examples():
    x = SubSource.from_probabilities([F(2, 5)])
    one = h_b(initial_state(x), 0)
    assert str(one.tree) == "[x1,u0]" and one.s == 1
    assert one.known[0][1] == AffineProb(F(2, 5), frozenset([0]))
    assert less_equal(AffineProb(F(2, 5)), unknown(1)) in one.constraints
    assert less_equal(unknown(0), unknown(1)) in one.constraints
    assert str(h_b(one, 0).tree) == "[[x1,u0],u1]"


def test_inconsistent_code_absent():
    x = SubSource.from_probabilities([F(2, 5), F(2, 5)])
    psi = run_algorithm3(x)
    trees = {str(s.tree) for s in psi.states}
    assert "[[x1,x2],u0]" not in trees
    assert psi.stats.infeasible >= 1 and psi.stats.verified == psi.stats.infeasible
    r = r_min_star(x)
    assert r.value == F(12, 5) - log2_of_rational(5)


def test_half_gives_zero():
    r = r_min_star(SubSource.from_probabilities([F(1, 2)]))
    assert r.value == 0 and str(r.best_code) == "[x1,u0]"
    assert r_min_star(SubSource()).value == 0
    with pytest.raises(ValueError):
        r_min_star(SubSource.from_probabilities([F(1)]))


def test_two_symbol_closed_form():
    x = SubSource.from_probabilities([F(49, 100), F(1, 2)])
    expected = (F(49, 50) + F(49, 50) * log2_of_rational(F(7, 10))
                - F(1, 50) * log2_of_rational(5))
    assert r_min_star(x).value == expected


def _merges_touch_known(tree, known):
    if isinstance(tree, Leaf):
        return True
    has = lambda t: any(s in known for s, _ in leaves(t))
    return ((has(tree.left) or has(tree.right))
            and _merges_touch_known(tree.left, known)
            and _merges_touch_known(tree.right, known))


@settings(max_examples=40)
@given(oracle_sized())
def test_matches_exhaustive_oracle(x):
    assert r_min_star(x).value == r_min_star_oracle(x).value


@settings(max_examples=30)
@given(oracle_sized(max_t=12))
def test_psi_structure(x):
    psi = run_algorithm3(x)
    t = threshold(x)
    known = set(x.symbols)
    assert psi.stats.verified == psi.stats.infeasible
    for s in psi.states:
        assert len(x) + s.s <= t
        assert _merges_touch_known(s.tree, known)
        assert kraft_sum(s.tree) == 1
        assert check(build_system(s, x)).feasible
        names = {sym for sym, _ in leaves(s.tree)}
        assert names == known | {f"u{i}" for i in range(s.s)}


@settings(max_examples=20)
@given(oracle_sized(max_t=10))
def test_dedup_does_not_change_value(x):
    assert r_min_star(x, dedup=False).value == r_min_star(x, dedup=True).value


def test_single_small_symbol_chain():
    x = SubSource.from_probabilities([F(1, 100)])
    psi = run_algorithm3(x)
    sizes = sorted(s.s for s in psi.states)
    assert sizes == list(range(1, 11))
    assert all(is_code(s, x) for s in psi.states)
