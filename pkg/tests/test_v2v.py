import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from huffbound.exactnum import compare, log2_of_rational, to_decimal
from huffbound.huffman import code_lengths, huffman_tree, redundancy
from huffbound.source import Source, SubSource
from huffbound.v2v import (Dictionary, expected_length, is_exhaustive,
                           v2v_code, v2v_prune_bound, v2v_redundancy,
                           word_source)

F = Fraction
BIN = Source.from_probabilities([F(9, 10), F(1, 10)])
TER = Source.from_probabilities([F(7, 10), F(2, 10), F(1, 10)])
ALL_PAIRS = ",".join(f"a{i}a{j}" for i in (1, 2, 3) for j in (1, 2, 3))


def test_parse_and_validation():
    d = Dictionary.parse("a1a1, a1a2,a2")
    assert d.words == (("a1", "a1"), ("a1", "a2"), ("a2",))
    assert str(d) == "a1a1,a1a2,a2" and d.max_length == 2
    with pytest.raises(ValueError):
        Dictionary.parse("a1,a1a2")
    with pytest.raises(ValueError):
        Dictionary.parse("a1,a1")
    with pytest.raises(ValueError):
        Dictionary.parse("b1")
    with pytest.raises(ValueError):
        Dictionary(())


def test_word_sources():
    src = word_source(Dictionary.parse("a1a1,a1a2,a2"), BIN)
    assert isinstance(src, Source)
    assert src.probabilities == (F(81, 100), F(9, 100), F(1, 10))
    assert word_source(Dictionary.parse("a1,a2"), BIN).probabilities == \
        BIN.probabilities
    src = word_source(Dictionary.parse(ALL_PAIRS), TER)
    products = [p * q for p in TER.probabilities for q in TER.probabilities]
    assert list(src.probabilities) == products
    partial = word_source(Dictionary.parse("a1a1,a1a2"), BIN)
    assert not isinstance(partial, Source)
    with pytest.raises(ValueError):
        word_source(Dictionary.parse("a3"), BIN)


def test_redundancy_examples():
    r = v2v_redundancy(Dictionary.parse(ALL_PAIRS), TER)
    assert r == log2_of_rational(F(2 ** 73 * 7 ** 140, 5 ** 200)) / 200
    assert to_decimal(r, 3) == "0.008"
    ident = v2v_redundancy(Dictionary.parse("a1,a2,a3"), TER)
    assert ident == redundancy(huffman_tree(TER), TER)
    d = Dictionary.parse("a1a1,a1a2,a2")
    lengths = code_lengths(v2v_code(d, BIN))
    assert lengths == {"a1a1": 1, "a1a2": 2, "a2": 2}
    src = word_source(d, BIN)
    assert v2v_redundancy(d, BIN) == (
        redundancy(huffman_tree(src), src) / F(19, 10))
    with pytest.raises(ValueError):
        v2v_redundancy(Dictionary.parse("a1a1,a2"), BIN)


def test_prune_bound_examples():
    v = v2v_prune_bound(Dictionary.parse("a1a1,a1a2"), BIN, 10)
    assert v == log2_of_rational(F(3 ** 342, 2 ** 71 * 5 ** 190)) / 280
    assert to_decimal(v, 3) == "0.107"
    v = v2v_prune_bound(Dictionary.parse("a1,a3"), TER, 3)
    assert v == log2_of_rational(F(2 ** 8 * 7 ** 7, 9 * 5 ** 10)) / 14
    assert to_decimal(v, 2) == "0.09"
    d = Dictionary.parse("a1a1,a1a2,a2")
    assert v2v_prune_bound(d, BIN, 2) == v2v_redundancy(d, BIN)
    with pytest.raises(ValueError):
        v2v_prune_bound(d, BIN, 1)


def random_dictionary(rng, k, max_len):
    """Exhaustive dictionary from random leaf expansions of the k-ary tree."""
    words = [(f"a{i + 1}",) for i in range(k)]
    for _ in range(rng.randint(0, 3)):
        grow = [w for w in words if len(w) < max_len]
        if not grow:
            break
        w = rng.choice(grow)
        words.remove(w)
        words += [w + (f"a{i + 1}",) for i in range(k)]
    return Dictionary(tuple(words))


@settings(max_examples=40)
@given(st.integers(0, 10 ** 6), st.integers(2, 3))
def test_bound_is_valid(seed, max_len):
    rng = random.Random(seed)
    k = rng.choice([2, 2, 3])
    weights = [rng.randint(1, 9) for _ in range(k)]
    base = Source.from_probabilities([F(w, sum(weights)) for w in weights])
    d = random_dictionary(rng, k, max_len)
    assert is_exhaustive(d, base)
    known = Dictionary(tuple(rng.sample(d.words, rng.randint(1, 2))))
    bound = v2v_prune_bound(known, base, max_len)
    assert compare(v2v_redundancy(d, base), bound) >= 0
    assert expected_length(d, base) > 0
