"""Sources and sub-sources with exact rational probabilities."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from .exactnum import ClosedFormReal, ZERO, xlog2x


def parse_probability(text: str) -> Fraction:
    """Parse ``"num/den"`` or an exact decimal literal such as ``"0.49"``."""
    text = text.strip()
    try:
        p = Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not an exact probability: {text!r}") from exc
    return p


def parse_probabilities(text: str) -> list[Fraction]:
    if not text.strip():
        return []
    return [parse_probability(t) for t in text.split(",")]


class SubSource:
    """Ordered symbols with known probabilities in (0, 1], summing to <= 1."""

    __slots__ = ("entries",)

    def __init__(self, entries: Iterable[tuple[str, Fraction]] = ()):
        entries = tuple((str(s), Fraction(p)) for s, p in entries)
        seen = set()
        for sym, p in entries:
            if sym in seen:
                raise ValueError(f"duplicate symbol {sym!r}")
            seen.add(sym)
            if not 0 < p <= 1:
                raise ValueError(f"probability of {sym!r} outside (0, 1]: {p}")
        if sum(p for _, p in entries) > 1:
            raise ValueError("probabilities sum to more than 1")
        self.entries = entries

    @classmethod
    def from_probabilities(cls, probs: Sequence, prefix: str = "x"):
        return cls((f"{prefix}{i + 1}", p) for i, p in enumerate(probs))

    @property
    def symbols(self) -> tuple[str, ...]:
        return tuple(s for s, _ in self.entries)

    @property
    def probabilities(self) -> tuple[Fraction, ...]:
        return tuple(p for _, p in self.entries)

    @property
    def total(self) -> Fraction:
        return sum(self.probabilities, Fraction(0))

    def prob(self, symbol: str) -> Fraction:
        for s, p in self.entries:
            if s == symbol:
                return p
        raise KeyError(symbol)

    def as_dict(self) -> dict[str, Fraction]:
        return dict(self.entries)

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __eq__(self, other):
        return isinstance(other, SubSource) and self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def __repr__(self):
        body = ", ".join(f"{s}={p}" for s, p in self.entries)
        return f"{type(self).__name__}({body})"


class Source(SubSource):
    """A sub-source whose probabilities sum to exactly one."""

    __slots__ = ()

    def __init__(self, entries: Iterable[tuple[str, Fraction]] = (),
                 allow_single: bool = False):
        super().__init__(entries)
        if self.total != 1:
            raise ValueError(f"source probabilities sum to {self.total}, not 1")
        if len(self.entries) < 2 and not allow_single:
            raise ValueError("a source needs at least two symbols")

    @classmethod
    def from_probabilities(cls, probs: Sequence, prefix: str = "a"):
        return cls((f"{prefix}{i + 1}", p) for i, p in enumerate(probs))


def entropy(s: SubSource) -> ClosedFormReal:
    """``-sum(p * log2(p))``, exact."""
    h = ZERO
    for _, p in s.entries:
        h = h - xlog2x(p)
    return h


def complement(x: SubSource, b: Source) -> SubSource:
    """Symbols of ``b`` that are not in ``x``."""
    known = b.as_dict()
    for sym, p in x.entries:
        if known.get(sym) != p:
            raise ValueError(f"{sym!r} with probability {p} is not in the source")
    inside = set(x.symbols)
    return SubSource((s, p) for s, p in b.entries if s not in inside)
