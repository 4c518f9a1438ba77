"""Huffman's algorithm as a merge state machine, code trees and redundancy."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Mapping, Union

from .exactnum import ClosedFormReal, ZERO, xlog2x
from .source import SubSource


@dataclass(frozen=True)
class Leaf:
    symbol: str

    def __str__(self):
        return self.symbol


@dataclass(frozen=True)
class Node:
    left: "CodeTree"
    right: "CodeTree"

    def __str__(self):
        return f"[{self.left},{self.right}]"


CodeTree = Union[Leaf, Node]


def leaves(t: CodeTree) -> Iterator[tuple[str, int]]:
    """Yield ``(symbol, depth)`` left to right."""
    stack = [(t, 0)]
    while stack:
        node, depth = stack.pop()
        if isinstance(node, Leaf):
            yield node.symbol, depth
        else:
            stack.append((node.right, depth + 1))
            stack.append((node.left, depth + 1))


def code_lengths(t: CodeTree) -> dict[str, int]:
    lengths = dict(leaves(t))
    if len(lengths) != sum(1 for _ in leaves(t)):
        raise ValueError("symbol appears more than once in the tree")
    return lengths


def kraft_sum(t: CodeTree) -> Fraction:
    return sum((Fraction(1, 2 ** d) for _, d in leaves(t)), Fraction(0))


def relabel(t: CodeTree, names: Mapping[str, str]) -> CodeTree:
    if isinstance(t, Leaf):
        return Leaf(names.get(t.symbol, t.symbol))
    return Node(relabel(t.left, names), relabel(t.right, names))


def normalize(t: CodeTree) -> CodeTree:
    """Child order fixed by canonical string, so mirror images coincide."""
    if isinstance(t, Leaf):
        return t
    a, b = normalize(t.left), normalize(t.right)
    return Node(a, b) if _order_key(a) <= _order_key(b) else Node(b, a)


def _order_key(t: CodeTree):
    # shallower subtrees first, then by text
    return (height(t), str(t))


def height(t: CodeTree) -> int:
    return max(d for _, d in leaves(t))


_TOKEN_SEP = "[],"


def parse_tree(text: str) -> CodeTree:
    text = text.replace(" ", "")
    pos = 0

    def expect(ch):
        nonlocal pos
        if pos >= len(text) or text[pos] != ch:
            raise ValueError(f"expected {ch!r} at {pos} in {text!r}")
        pos += 1

    def parse():
        nonlocal pos
        if pos < len(text) and text[pos] == "[":
            pos += 1
            left = parse()
            expect(",")
            right = parse()
            expect("]")
            return Node(left, right)
        start = pos
        while pos < len(text) and text[pos] not in _TOKEN_SEP:
            pos += 1
        if start == pos:
            raise ValueError(f"empty symbol at {pos} in {text!r}")
        return Leaf(text[start:pos])

    tree = parse()
    if pos != len(text):
        raise ValueError(f"trailing text in {text!r}")
    return tree


def merge_step(probs: list[Fraction]) -> tuple[int, int]:
    """Indices ``j < k`` of the two least probable elements.

    Ties go to the lowest indices.
    """
    if len(probs) < 2:
        raise ValueError("need two elements to merge")
    order = sorted(range(len(probs)), key=lambda i: (probs[i], i))
    j, k = sorted(order[:2])
    return j, k


def huffman_tree(a: SubSource) -> CodeTree:
    if len(a) < 2:
        raise ValueError("Huffman's algorithm needs at least two symbols")
    state: list[CodeTree] = [Leaf(s) for s in a.symbols]
    probs = list(a.probabilities)
    while len(state) > 1:
        j, k = merge_step(probs)
        merged = Node(state[j], state[k])
        p = probs[j] + probs[k]
        for idx in (k, j):
            del state[idx]
            del probs[idx]
        state.append(merged)
        probs.append(p)
    return state[0]


def codewords(t: CodeTree) -> dict[str, str]:
    """Codewords by scanning the bracketed form right of each symbol.

    For each symbol the scan skips other symbols and whole bracketed groups;
    every ``]`` reached emits 0 if a ``,`` was passed since the previous
    emission and 1 otherwise. Bits come out leaf-to-root. The net effect is
    left child -> 0, right child -> 1.
    """
    text = str(t)
    words = {}
    for sym, _ in leaves(t):
        if isinstance(t, Leaf):
            words[sym] = ""
            continue
        pos = _symbol_end(text, sym)
        bits = []
        comma = False
        while pos < len(text):
            ch = text[pos]
            if ch == "[":
                pos = _matching_close(text, pos)
            elif ch == ",":
                comma = True
            elif ch == "]":
                bits.append("0" if comma else "1")
                comma = False
            pos += 1
        words[sym] = "".join(reversed(bits))
    return words


def _symbol_end(text: str, sym: str) -> int:
    start = 0
    while True:
        i = text.index(sym, start)
        end = i + len(sym)
        before_ok = i == 0 or text[i - 1] in _TOKEN_SEP
        after_ok = end == len(text) or text[end] in _TOKEN_SEP
        if before_ok and after_ok:
            return end
        start = i + 1


def _matching_close(text: str, pos: int) -> int:
    depth = 0
    for i in range(pos, len(text)):
        if text[i] == "[":
            depth += 1
        elif text[i] == "]":
            depth -= 1
            if depth == 0:
                return i
    raise ValueError("unbalanced brackets")


def tree_walk_codewords(t: CodeTree) -> dict[str, str]:
    out = {}

    def walk(node, prefix):
        if isinstance(node, Leaf):
            out[node.symbol] = prefix
        else:
            walk(node.left, prefix + "0")
            walk(node.right, prefix + "1")

    walk(t, "")
    return out


def average_length(t: CodeTree, a: SubSource) -> Fraction:
    lengths = code_lengths(t)
    return sum((p * lengths[s] for s, p in a.entries), Fraction(0))


def redundancy(t: CodeTree, a: SubSource) -> ClosedFormReal:
    """Average codeword length minus entropy, exact."""
    lengths = code_lengths(t)
    if set(lengths) != set(a.symbols):
        raise ValueError("tree leaves do not match the source symbols")
    r = ZERO
    for s, p in a.entries:
        r = r + p * lengths[s] + xlog2x(p)
    return r
