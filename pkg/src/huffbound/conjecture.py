"""Candidate closed form for the general bound with two known probabilities.

Three regimes: the two symbols already carry all the mass; one of them is at
least 1/2, where the bound splits into two single-symbol bounds; otherwise a
small family of codes anchored at the dyadic neighbours of p1 and p2.
"""

from __future__ import annotations

import csv
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .exactnum import EQUAL, LESS, ClosedFormReal, compare, log2_of_rational
from .huffman import CodeTree, Leaf, Node, redundancy
from .optimize import code_value
from .prune import r_min_star
from .source import Source, SubSource

log = logging.getLogger(__name__)


def _floor_log(p: Fraction) -> int:
    """Largest k with 2**k <= p."""
    k = p.numerator.bit_length() - p.denominator.bit_length()
    while Fraction(2) ** k > p:
        k -= 1
    while Fraction(2) ** (k + 1) <= p:
        k += 1
    return k


def neg_log_bounds(p: Fraction) -> tuple[int, int]:
    """``floor(-log2 p)`` and ``ceil(-log2 p)``, exact."""
    k = _floor_log(p)
    if Fraction(2) ** k == p:
        return -k, -k
    return -k - 1, -k


def tree_from_depths(depths: list[tuple[str, int]]) -> CodeTree:
    """Full binary tree with the given leaf depths (Kraft sum must be 1)."""
    if sum(Fraction(1, 2 ** d) for _, d in depths) != 1:
        raise ValueError("leaf depths do not fill the tree")
    # canonical code: shallow leaves take the leftmost free slots
    ordered = sorted(depths, key=lambda e: e[1])
    root: dict = {}
    code, prev = 0, ordered[0][1]
    for i, (sym, d) in enumerate(ordered):
        if i:
            code = (code + 1) << (d - prev)
        prev = d
        node = root
        bits = format(code, f"0{d}b") if d else ""
        for bit in bits[:-1]:
            node = node.setdefault(bit, {})
        if bits:
            node[bits[-1]] = sym
        else:
            return Leaf(sym)

    def build(node) -> CodeTree:
        if isinstance(node, str):
            return Leaf(node)
        return Node(build(node["0"]), build(node["1"]))

    return build(root)


@dataclass(frozen=True)
class DyadicAnchorCode:
    """x1 at depth a, x2 at depth b, unknown leaves on the spare capacity."""

    a: int
    b: int

    def __post_init__(self):
        if self.a < 1 or self.b < 1:
            raise ValueError("depths must be positive")
        if self.spare <= 0:
            raise ValueError(f"depths ({self.a}, {self.b}) leave no room "
                             "for unknown symbols")

    @property
    def spare(self) -> Fraction:
        return 1 - Fraction(1, 2 ** self.a) - Fraction(1, 2 ** self.b)

    def unknown_depths(self) -> list[int]:
        # one leaf per set bit of the binary expansion of the spare capacity
        spare, depths, d = self.spare, [], 0
        while spare:
            d += 1
            if spare >= Fraction(1, 2 ** d):
                spare -= Fraction(1, 2 ** d)
                depths.append(d)
        return depths

    @property
    def tree(self) -> CodeTree:
        depths = [("x1", self.a), ("x2", self.b)]
        depths += [(f"y{i + 1}", d) for i, d in enumerate(self.unknown_depths())]
        return tree_from_depths(depths)


def anchor_codes(p1: Fraction, p2: Fraction) -> list[DyadicAnchorCode]:
    out = []
    for a in sorted(set(neg_log_bounds(p1))):
        for b in sorted(set(neg_log_bounds(p2))):
            if Fraction(1, 2 ** a) + Fraction(1, 2 ** b) < 1:
                out.append(DyadicAnchorCode(a, b))
    return out


def anchor_value(p1: Fraction, p2: Fraction, code: DyadicAnchorCode
                 ) -> ClosedFormReal:
    """``bt log bt + b0 - bt log(spare)`` for one anchor code."""
    bt = 1 - p1 - p2
    beta0 = (p1 * code.a + p2 * code.b + p1 * log2_of_rational(p1)
             + p2 * log2_of_rational(p2))
    return beta0 + bt * log2_of_rational(bt) - bt * log2_of_rational(code.spare)


def _single(p: Fraction) -> ClosedFormReal:
    if p == 1:
        return ClosedFormReal(0)
    return r_min_star(SubSource.from_probabilities([p])).value


def conjecture_case(p1: Fraction, p2: Fraction) -> str:
    _check(p1, p2)
    if p1 + p2 == 1:
        return "a"
    if max(p1, p2) >= Fraction(1, 2):
        return "b"
    return "c"


def _check(p1, p2):
    if not (0 < p1 and 0 < p2):
        raise ValueError("probabilities must be positive")
    if p1 + p2 > 1:
        raise ValueError(f"p1 + p2 = {p1 + p2} exceeds 1")


def conjecture_value(p1, p2) -> ClosedFormReal:
    p1, p2 = Fraction(p1), Fraction(p2)
    case = conjecture_case(p1, p2)
    if case == "a":
        src = Source.from_probabilities([p1, p2], prefix="x")
        return redundancy(Node(Leaf("x1"), Leaf("x2")), src)
    if case == "b":
        major, minor = (p1, p2) if p1 >= p2 else (p2, p1)
        return _single(major) + (1 - major) * _single(minor / (1 - major))
    best = None
    for code in anchor_codes(p1, p2):
        v = anchor_value(p1, p2, code)
        if best is None or compare(v, best) == LESS:
            best = v
    if best is None:
        raise ValueError(f"no anchor code for ({p1}, {p2})")
    return best


def anchor_witness(p1, p2, code: DyadicAnchorCode) -> dict[str, Fraction]:
    x = SubSource.from_probabilities([Fraction(p1), Fraction(p2)], prefix="x")
    return code_value(x, code.tree)[1]


@dataclass(frozen=True)
class GridPoint:
    p1: Fraction
    p2: Fraction
    conjectured: ClosedFormReal
    engine: ClosedFormReal

    @property
    def agrees(self) -> bool:
        return compare(self.conjectured, self.engine) == EQUAL


def grid(step: Fraction, lo: Optional[Fraction] = None,
         hi: Optional[Fraction] = None) -> list[tuple[Fraction, Fraction]]:
    step = Fraction(step)
    if step <= 0:
        raise ValueError("step must be positive")
    lo = step if lo is None else Fraction(lo)
    hi = 1 - step if hi is None else Fraction(hi)
    values = [lo + k * step for k in range(int((hi - lo) / step) + 1)]
    return [(a, b) for a in values for b in values if a + b <= 1]


def evaluate_point(point) -> GridPoint:
    p1, p2 = point
    engine = r_min_star(SubSource.from_probabilities([p1, p2], prefix="x"))
    return GridPoint(p1, p2, conjecture_value(p1, p2), engine.value)


def check_grid(step=Fraction(1, 50), lo=None, hi=None, workers: int = 1
               ) -> tuple[list[GridPoint], int]:
    """Mismatching grid points (sorted by p1, p2) and the number checked."""
    points = grid(step, lo, hi)
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            results = list(pool.map(evaluate_point, points, chunksize=8))
    else:
        results = [evaluate_point(pt) for pt in points]
    bad = [r for r in results if not r.agrees]
    log.info("checked %d grid points, %d mismatches", len(points), len(bad))
    return sorted(bad, key=lambda r: (r.p1, r.p2)), len(points)


def write_mismatches(path, mismatches: list[GridPoint]) -> None:
    # no mismatches -> an empty file
    with open(path, "w", newline="") as fh:
        if not mismatches:
            return
        w = csv.writer(fh)
        w.writerow(["p1", "p2", "conjecture", "engine"])
        for r in mismatches:
            w.writerow([r.p1, r.p2, r.conjectured, r.engine])
