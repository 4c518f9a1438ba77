"""Extended-state enumeration with constraint tracking.

Only merges that involve at least one known-side element are generated;
unknown symbols are drawn on demand in non-decreasing probability order.
Every drawn merge adds the linear conditions under which it is a legal
Huffman step, and states whose conditions are provably inconsistent are
dropped, always on the strength of a verified certificate.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Optional

from .exactnum import ZERO, EQUAL, LESS, compare, to_decimal
from .feasibility import (InvariantError, _dot, _num, build_system, check,
                          verify)
from .huffman import CodeTree, Leaf, Node, leaves, normalize
from .optimize import BoundResult, code_value, threshold
from .source import SubSource

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class AffineProb:
    """``const + sum(u_i for i in unknowns)``."""

    const: Fraction
    unknowns: frozenset = frozenset()

    def __add__(self, other: "AffineProb") -> "AffineProb":
        if self.unknowns & other.unknowns:
            raise InvariantError("unknown symbol used twice")
        return AffineProb(self.const + other.const, self.unknowns | other.unknowns)

    def __str__(self):
        parts = [str(self.const)] if self.const or not self.unknowns else []
        parts += [f"u{i}" for i in sorted(self.unknowns)]
        return " + ".join(parts)


def unknown(i: int) -> AffineProb:
    return AffineProb(_num(0), frozenset([i]))


@dataclass(frozen=True, order=True)
class Constraint:
    """Normalized inequality ``const + sum(coef * u_idx) >= 0``."""

    coeffs: tuple[tuple[int, int], ...]
    const: Fraction

    def __str__(self):
        terms = " ".join(f"{'+' if c > 0 else '-'} u{i}" for i, c in self.coeffs)
        return f"{self.const} {terms} >= 0"


def less_equal(lhs: AffineProb, rhs: AffineProb) -> Optional[Constraint]:
    """``lhs <= rhs`` in normal form, or None when it holds trivially."""
    coeffs = [(i, 1) for i in rhs.unknowns - lhs.unknowns]
    coeffs += [(i, -1) for i in lhs.unknowns - rhs.unknowns]
    const = rhs.const - lhs.const
    if not coeffs and const >= 0:
        return None
    return Constraint(tuple(sorted(coeffs)), const)


@dataclass(frozen=True)
class ExtendedState:
    known: tuple[tuple[CodeTree, AffineProb], ...]
    s: int
    constraints: frozenset

    def key(self):
        trees = tuple(sorted(str(normalize(t)) for t, _ in self.known))
        return trees, self.s, self.constraints

    @property
    def tree(self) -> CodeTree:
        if len(self.known) != 1:
            raise ValueError("state is not a complete code yet")
        return self.known[0][0]


def initial_state(x: SubSource) -> ExtendedState:
    if len(x) == 0:
        raise ValueError("empty sub-source: the general bound is 0")
    for sym in x.symbols:
        if re.fullmatch(r"u\d+", sym):
            raise ValueError(f"symbol name {sym!r} clashes with unknown leaves")
    known = tuple((Leaf(sym), AffineProb(_num(p))) for sym, p in x.entries)
    start = less_equal(AffineProb(_num(0)), unknown(0))
    return ExtendedState(known, 0, frozenset([start]))


def merge_known_conditions(st: ExtendedState, i: int, j: int) -> list:
    """Conditions for merging known elements ``i < j`` (0-based)."""
    k = st.known
    pi, pj = k[i][1], k[j][1]
    pairs = [(pi, k[l][1]) for l in range(len(k)) if l not in (i, j)]
    pairs += [(pj, k[l][1]) for l in range(len(k)) if l not in (i, j)]
    pairs += [(pi, unknown(st.s)), (pj, unknown(st.s))]
    return pairs


def merge_unknown_conditions(st: ExtendedState, i: int) -> list:
    """Conditions for merging known element ``i`` with a fresh unknown."""
    k = st.known
    pi, us, nxt = k[i][1], unknown(st.s), unknown(st.s + 1)
    pairs = [(pi, k[l][1]) for l in range(len(k)) if l != i]
    pairs += [(us, k[l][1]) for l in range(len(k)) if l != i]
    pairs += [(pi, nxt), (us, nxt)]
    return pairs


def _with(st: ExtendedState, known, s, pairs) -> ExtendedState:
    extra = {c for c in (less_equal(a, b) for a, b in pairs) if c is not None}
    return ExtendedState(tuple(known), s, st.constraints | extra)


def h_a(st: ExtendedState, i: int, j: int) -> ExtendedState:
    """Merge known elements ``i < j`` (0-based indices into K)."""
    if not 0 <= i < j < len(st.known):
        raise IndexError(f"bad merge indices {i}, {j}")
    (ti, pi), (tj, pj) = st.known[i], st.known[j]
    rest = [e for l, e in enumerate(st.known) if l not in (i, j)]
    known = rest + [(Node(ti, tj), pi + pj)]
    return _with(st, known, st.s, merge_known_conditions(st, i, j))


def h_b(st: ExtendedState, i: int) -> ExtendedState:
    """Merge known element ``i`` with the next unknown symbol ``u_s``."""
    if not 0 <= i < len(st.known):
        raise IndexError(f"bad merge index {i}")
    ti, pi = st.known[i]
    rest = [e for l, e in enumerate(st.known) if l != i]
    known = rest + [(Node(ti, Leaf(f"u{st.s}")), pi + unknown(st.s))]
    return _with(st, known, st.s + 1, merge_unknown_conditions(st, i))


@dataclass
class PruneStats:
    generated: int = 0
    duplicates: int = 0
    infeasible: int = 0
    verified: int = 0
    shortcut: int = 0
    levels: int = 0


@dataclass
class Psi:
    states: list
    threshold: int
    stats: PruneStats = field(default_factory=PruneStats)


def _expand(st: ExtendedState, m: int, t: int) -> Iterable[ExtendedState]:
    n = len(st.known)
    for i in range(n):
        for j in range(i + 1, n):
            yield h_a(st, i, j)
    if m + st.s < t:
        for i in range(n):
            yield h_b(st, i)


def run_algorithm3(x: SubSource, dedup: bool = True) -> Psi:
    """Harvest every consistent state whose known part is a single tree."""
    m, t = len(x), threshold(x)
    stats = PruneStats()
    frontier = [(initial_state(x), ())]
    psi = []
    while frontier:
        stats.levels += 1
        candidates = []
        seen = set()
        for st, point in frontier:
            for nxt in _expand(st, m, t):
                stats.generated += 1
                if dedup:
                    key = nxt.key()
                    if key in seen:
                        stats.duplicates += 1
                        continue
                    seen.add(key)
                candidates.append((nxt, point))
        frontier, points = [], {}
        for st, hint in candidates:
            system = build_system(st, x)
            point = _try_point(system, hint)
            if point is None:
                decision = check(system)
                if not decision.feasible:
                    stats.infeasible += 1
                    if not verify(system, decision.certificate):
                        raise InvariantError("unverified certificate")
                    stats.verified += 1
                    continue
                point = tuple(_num(v) for v in decision.point)
            else:
                stats.shortcut += 1
            frontier.append(st)
            points[id(st)] = point
            if len(st.known) == 1:
                psi.append(st)
        frontier = [(st, points[id(st)]) for st in frontier]
    log.debug("pruned search on %s: %d states in psi, %s", x, len(psi), stats)
    return Psi(psi, t, stats)


def _try_point(system, hint):
    """A solution built from the parent's solution, or None.

    When the child has one more variable, its value is chosen as the least
    one compatible with the other coordinates held fixed.
    """
    d = system.nvars
    if len(hint) == d:
        return hint if system.satisfied_by(hint) else None
    if len(hint) != d - 1:
        return None
    lo, hi = None, None
    for row, b in zip(system.rows, system.rhs):
        rest = b - _dot(row, hint)
        a = row[-1]
        if a == 0:
            if rest < 0:
                return None
        elif a > 0:
            bound = rest / a
            hi = bound if hi is None or bound < hi else hi
        else:
            bound = rest / a
            lo = bound if lo is None or bound > lo else lo
    value = lo if lo is not None else (hi if hi is not None else _num(0))
    if hi is not None and value > hi:
        return None
    return tuple(hint) + (value,)


def is_code(st: ExtendedState, x: SubSource) -> bool:
    # with no unknowns drawn the leaves must already carry all the mass
    return st.s > 0 or x.total == 1


def state_value(st: ExtendedState, x: SubSource):
    return code_value(x, st.tree)


def r_min_star(x: SubSource, dedup: bool = True) -> BoundResult:
    """General bound over all alphabet sizes, via the pruned enumeration."""
    if len(x) == 0:
        code = Node(Leaf("u0"), Leaf("u1"))
        return BoundResult(ZERO, code, {"u0": Fraction(1, 2), "u1": Fraction(1, 2)},
                           n=2, threshold=None, psi_size=0)
    if len(x) == 1 and x.total == 1:
        raise ValueError("a single symbol of probability 1 is not a source")
    return _r_min_star(x, dedup)


@lru_cache(maxsize=65536)
def _r_min_star(x: SubSource, dedup: bool) -> BoundResult:
    psi = run_algorithm3(x, dedup=dedup)
    best = None
    for st in psi.states:
        if not is_code(st, x):
            continue
        value, witness = state_value(st, x)
        size = len(x) + st.s
        text = str(st.tree)
        if best is None:
            best = (value, size, text, st, witness)
            continue
        c = compare(value, best[0])
        if c == LESS or (c == EQUAL and (size, text) < (best[1], best[2])):
            best = (value, size, text, st, witness)
    if best is None:
        raise InvariantError(f"no admissible code found for {x}")
    value, size, _, st, witness = best
    return BoundResult(value, st.tree, witness, n=size, threshold=psi.threshold,
                       psi_size=len(psi.states),
                       extra={"stats": psi.stats, "psi": psi})


def dump_psi(x: SubSource, psi: Psi, digits: int = 6) -> str:
    """One line per member: tree, s, number of constraints, value."""
    lines = []
    for st in psi.states:
        if is_code(st, x):
            value = to_decimal(state_value(st, x)[0], digits)
        else:
            value = "incomplete"
        lines.append(f"{st.tree}\t{st.s}\t{len(st.constraints)}\t{value}")
    return "\n".join(lines)
