"""Variable-to-variable codes: dictionary redundancy and search-pruning bounds.

A dictionary parses a memoryless source into words; the words are then
Huffman coded. Redundancy is measured per source symbol.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from .exactnum import ClosedFormReal
from .huffman import CodeTree, huffman_tree, redundancy
from .prune import r_min_star
from .source import Source, SubSource

_SYMBOL = re.compile(r"a\d+")


@dataclass(frozen=True)
class Dictionary:
    """Prefix-free words, each a tuple of base symbol ids."""

    words: tuple[tuple[str, ...], ...]

    def __post_init__(self):
        if not self.words:
            raise ValueError("empty dictionary")
        if any(not w for w in self.words):
            raise ValueError("empty word")
        if len(set(self.words)) != len(self.words):
            raise ValueError("duplicate word")
        for u in self.words:
            for v in self.words:
                if u != v and v[:len(u)] == u:
                    raise ValueError(f"{name(u)} is a prefix of {name(v)}")

    @classmethod
    def parse(cls, text: str) -> "Dictionary":
        words = []
        for chunk in text.split(","):
            chunk = chunk.strip()
            symbols = _SYMBOL.findall(chunk)
            if "".join(symbols) != chunk or not symbols:
                raise ValueError(f"bad word {chunk!r}; expected e.g. a1a2")
            words.append(tuple(symbols))
        return cls(tuple(words))

    @property
    def max_length(self) -> int:
        return max(len(w) for w in self.words)

    def __str__(self):
        return ",".join(name(w) for w in self.words)


def name(word: Sequence[str]) -> str:
    return "".join(word)


def _base_probs(d: Dictionary, base: SubSource) -> dict[str, Fraction]:
    probs = base.as_dict()
    for w in d.words:
        for sym in w:
            if sym not in probs:
                raise ValueError(f"symbol {sym!r} not in the base source")
    return probs


def is_exhaustive(d: Dictionary, base: Source) -> bool:
    """Kraft equality over the |base|-ary parse tree."""
    _base_probs(d, base)
    k = len(base)
    return sum(Fraction(1, k ** len(w)) for w in d.words) == 1


def word_probability(word: Sequence[str], base: SubSource) -> Fraction:
    probs = base.as_dict()
    p = Fraction(1)
    for sym in word:
        p *= probs[sym]
    return p


def word_source(d: Dictionary, base: Source) -> Union[Source, SubSource]:
    """Words as symbols; a full source exactly when ``d`` is exhaustive."""
    _base_probs(d, base)
    entries = [(name(w), word_probability(w, base)) for w in d.words]
    if is_exhaustive(d, base):
        return Source(entries)
    return SubSource(entries)


def expected_length(d: Dictionary, base: SubSource) -> Fraction:
    return sum((word_probability(w, base) * len(w) for w in d.words),
               Fraction(0))


def v2v_code(d: Dictionary, base: Source) -> CodeTree:
    src = word_source(d, base)
    if not isinstance(src, Source):
        raise ValueError("dictionary is not exhaustive")
    return huffman_tree(src)


def v2v_redundancy(d: Dictionary, base: Source) -> ClosedFormReal:
    """Huffman redundancy of the word source per expected source symbol."""
    src = word_source(d, base)
    if not isinstance(src, Source):
        raise ValueError("dictionary is not exhaustive")
    return redundancy(huffman_tree(src), src) / expected_length(d, base)


def v2v_prune_bound(known: Dictionary, base: Source, max_len: int
                    ) -> ClosedFormReal:
    """Least redundancy of any dictionary containing ``known`` whose words
    are at most ``max_len`` symbols long."""
    if known.max_length > max_len:
        raise ValueError(f"a known word is longer than {max_len}")
    x = SubSource((name(w), word_probability(w, base)) for w in known.words)
    denom = max_len + sum((p * (len(w) - max_len)
                           for w, (_, p) in zip(known.words, x.entries)),
                          Fraction(0))
    if denom <= 0:
        raise ValueError("non-positive expected length")
    return r_min_star(x).value / denom
