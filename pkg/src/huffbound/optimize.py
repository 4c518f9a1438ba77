"""Closed-form minimum redundancy of a fixed code, and the exhaustive bounds.

For a code with known-symbol lengths fixed, the redundancy as a function of
the unknown probabilities is convex; its minimum under the total-probability
constraint puts mass proportional to ``2**-length`` on each unknown leaf.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil
from typing import Mapping, Optional

from .enumeration import DEFAULT_CAP, all_codes
from .exactnum import (ClosedFormReal, EQUAL, LESS, ZERO, compare,
                       log2_of_rational, xlog2x)
from .huffman import CodeTree, Leaf, Node, leaves, relabel
from .source import SubSource


@dataclass(frozen=True)
class BetaDecomposition:
    beta0: ClosedFormReal
    beta_unknown: tuple[int, ...]
    beta_t: Fraction
    unknown_leaves: tuple[str, ...] = ()

    def __post_init__(self):
        if not 0 <= self.beta_t <= 1:
            raise ValueError(f"unknown mass {self.beta_t} outside [0, 1]")
        if any(b < 1 for b in self.beta_unknown):
            raise ValueError("unknown-leaf lengths must be positive")


@dataclass
class BoundResult:
    value: ClosedFormReal
    best_code: CodeTree
    witness: dict[str, Fraction]
    n: int = 0
    threshold: Optional[int] = None
    psi_size: Optional[int] = None
    extra: dict = field(default_factory=dict)

    def source(self, x: SubSource) -> SubSource:
        """The completed source that attains the bound."""
        return SubSource(list(x.entries) + list(self.witness.items()))


def decompose(x: SubSource, c: CodeTree,
              assignment: Optional[Mapping[str, str]] = None) -> BetaDecomposition:
    """Split the redundancy of ``c`` into known and unknown contributions.

    ``assignment`` maps each known symbol to the leaf carrying it; by default
    known symbols sit on the leaves of the same name.
    """
    if assignment is None:
        assignment = {s: s for s in x.symbols}
    depth = dict(leaves(c))
    targets = list(assignment.values())
    if len(set(targets)) != len(targets):
        raise ValueError("two known symbols assigned to one leaf")
    if set(assignment) != set(x.symbols):
        raise ValueError("assignment must cover exactly the known symbols")
    beta0 = ZERO
    for sym, p in x.entries:
        leaf = assignment[sym]
        if leaf not in depth:
            raise ValueError(f"leaf {leaf!r} not in the code")
        beta0 = beta0 + p * depth[leaf] + xlog2x(p)
    taken = set(targets)
    unknown = [(s, d) for s, d in leaves(c) if s not in taken]
    return BetaDecomposition(beta0, tuple(d for _, d in unknown),
                             1 - x.total, tuple(s for s, _ in unknown))


def min_redundancy_for_code(b: BetaDecomposition
                            ) -> tuple[ClosedFormReal, dict[str, Fraction]]:
    """Minimum over the unknown probabilities, and the minimizer."""
    if b.beta_t == 0:
        return b.beta0, {}
    if not b.beta_unknown:
        raise ValueError("positive unknown mass but no unknown leaves")
    capacity = sum(Fraction(1, 2 ** d) for d in b.beta_unknown)
    value = b.beta0 + b.beta_t * log2_of_rational(b.beta_t / capacity)
    names = b.unknown_leaves or tuple(f"y{i + 1}"
                                      for i in range(len(b.beta_unknown)))
    witness = {name: Fraction(1, 2 ** d) * b.beta_t / capacity
               for name, d in zip(names, b.beta_unknown)}
    return value, witness


def code_value(x: SubSource, c: CodeTree,
               assignment: Optional[Mapping[str, str]] = None):
    return min_redundancy_for_code(decompose(x, c, assignment))


def threshold(x: SubSource) -> int:
    """Alphabet size beyond which extra unknown symbols never help."""
    if len(x) == 0:
        raise ValueError("threshold undefined for an empty sub-source; "
                         "the bound is 0")
    return len(x) + ceil((1 - x.total) / min(x.probabilities))


def _better(candidate, best) -> bool:
    if best is None:
        return True
    c = compare(candidate[0], best[0])
    return c == LESS or (c == EQUAL and candidate[1] < best[1])


def r_min_n(x: SubSource, n: int, allow_large: bool = False) -> BoundResult:
    """Tight lower bound on Huffman redundancy for alphabets of exactly ``n``."""
    m = len(x)
    if n < 2:
        raise ValueError("alphabet size must be at least 2")
    if m > n:
        raise ValueError(f"{m} known symbols do not fit in {n}")
    if n == m and x.total != 1:
        raise ValueError("no unknown symbols left to carry the missing mass")
    if n > m and x.total == 1:
        raise ValueError("known probabilities sum to 1; unknown symbols "
                         "would need zero probability")
    # the value depends only on the leaf-depth multiset and on which depths
    # the known symbols take, so one tree per depth profile is enough
    profiles: dict[tuple[int, ...], CodeTree] = {}
    for tree in all_codes(n, dedup=True, allow_large=allow_large, prefix="t"):
        key = tuple(sorted(d for _, d in leaves(tree)))
        profiles.setdefault(key, tree)
    best = None
    for tree in profiles.values():
        slots = list(leaves(tree))
        for chosen in sorted(set(itertools.permutations(
                [d for _, d in slots], m))):
            free = list(slots)
            names = {}
            for sym, d in zip(x.symbols, chosen):
                leaf = next(e for e in free if e[1] == d)
                free.remove(leaf)
                names[leaf[0]] = sym
            names.update((s, f"y{i + 1}") for i, (s, _) in enumerate(free))
            code = relabel(tree, names)
            value, _ = code_value(x, code)
            candidate = (value, str(code), code)
            if _better(candidate, best):
                best = candidate
    value, _, code = best
    _, witness = code_value(x, code)
    return BoundResult(value, code, witness, n=n)


def _sizes(x: SubSource, n: int) -> list[int]:
    m = len(x)
    if x.total == 1:
        return [m] if 2 <= m <= n else []
    return list(range(max(2, m + 1), n + 1))


def r_min_upto(x: SubSource, n: int, allow_large: bool = False) -> BoundResult:
    """Bound over all alphabet sizes from 2 up to ``n``."""
    if n < 2:
        raise ValueError("alphabet size must be at least 2")
    if len(x) == 0:
        return _empty_bound()
    sizes = _sizes(x, n)
    if not sizes:
        raise ValueError(f"no admissible alphabet size up to {n}")
    best = None
    for k in sizes:
        r = r_min_n(x, k, allow_large=allow_large)
        if best is None or compare(r.value, best.value) == LESS:
            best = r
    return best


def _empty_bound() -> BoundResult:
    code = Node(Leaf("y1"), Leaf("y2"))
    return BoundResult(ZERO, code, {"y1": Fraction(1, 2), "y2": Fraction(1, 2)},
                       n=2)


def r_min_star_oracle(x: SubSource, allow_large: bool = False) -> BoundResult:
    """General bound by exhaustive enumeration up to the threshold size."""
    if len(x) == 0:
        return _empty_bound()
    t = threshold(x)
    if t > DEFAULT_CAP and not allow_large:
        raise ValueError(f"threshold {t} exceeds the enumeration cap "
                         f"{DEFAULT_CAP}; use prune.r_min_star instead")
    result = r_min_upto(x, max(2, t), allow_large=allow_large)
    result.threshold = t
    return result
