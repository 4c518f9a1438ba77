from fractions import Fraction

import pytest
from hypothesis import given

from huffbound.source import (Source, SubSource, complement, entropy,
                              parse_probabilities, parse_probability)
from huffbound.exactnum import ClosedFormReal, to_decimal

from conftest import distributions


def test_parse():
    assert parse_probability("0.49") == Fraction(49, 100)
    assert parse_probabilities("1/2, 1/4") == [Fraction(1, 2), Fraction(1, 4)]
    assert parse_probabilities("") == []
    with pytest.raises(ValueError):
        parse_probability("abc")


def test_validation():
    with pytest.raises(ValueError):
        SubSource.from_probabilities([Fraction(3, 5), Fraction(3, 5)])
    with pytest.raises(ValueError):
        SubSource.from_probabilities([Fraction(0)])
    with pytest.raises(ValueError):
        SubSource([("x", Fraction(1, 4)), ("x", Fraction(1, 4))])
    with pytest.raises(ValueError):
        Source.from_probabilities([Fraction(1, 2)])
    with pytest.raises(ValueError):
        Source.from_probabilities([Fraction(1)])
    assert len(SubSource()) == 0


def test_entropy_examples():
    assert entropy(Source.from_probabilities(
        [Fraction(1, 2), Fraction(1, 4), Fraction(1, 4)])) == ClosedFormReal(
        Fraction(3, 2))
    assert entropy(Source.from_probabilities([Fraction(1, 2)] * 2)) == 1


def test_entropy_of_intro_source():
    # independent float evaluation of -sum p log2 p
    import math
    probs = [Fraction(1, 10), Fraction(21, 100), Fraction(15, 100),
             Fraction(3, 10), Fraction(24, 100)]
    expected = -sum(float(p) * math.log2(p) for p in probs)
    h = entropy(Source.from_probabilities(probs))
    assert to_decimal(h, 4) == f"{expected:.4f}" == "2.2308"


def test_complement_examples():
    half = Source.from_probabilities([Fraction(1, 2)] * 2)
    assert complement(SubSource(), half) == SubSource(half.entries)
    b = Source.from_probabilities([Fraction(9, 10), Fraction(1, 10)])
    y = complement(SubSource([("a1", Fraction(9, 10))]), b)
    assert y.entries == (("a2", Fraction(1, 10)),)
    words = Source([("a1a1", Fraction(81, 100)), ("a1a2", Fraction(9, 100)),
                    ("a2", Fraction(1, 10))])
    y = complement(SubSource(words.entries[:2]), words)
    assert y.probabilities == (Fraction(1, 10),)
    with pytest.raises(ValueError):
        complement(SubSource([("zz", Fraction(1, 2))]), half)


@given(distributions())
def test_complement_mass(probs):
    b = Source.from_probabilities(probs)
    x = SubSource(b.entries[: len(probs) // 2])
    assert complement(x, b).total == 1 - x.total


def test_uniform_entropy():
    for k in range(1, 6):
        src = Source.from_probabilities([Fraction(1, 2 ** k)] * 2 ** k)
        assert entropy(src) == k
