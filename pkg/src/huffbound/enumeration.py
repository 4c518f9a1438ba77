"""Exhaustive merge-trajectory enumeration of prefix-free codes.

This is the brute-force oracle; it grows like n!(n-1)!/2**(n-1) and is
capped at small alphabets unless the caller opts in.
"""

from __future__ import annotations

from math import factorial

from .huffman import CodeTree, Leaf, Node, normalize

DEFAULT_CAP = 8


def trajectory_count(n: int) -> int:
    return factorial(n) * factorial(n - 1) // 2 ** (n - 1)


def _check(n: int, allow_large: bool) -> None:
    if n < 2:
        raise ValueError("need at least two symbols")
    if n > DEFAULT_CAP and not allow_large:
        raise ValueError(f"n={n} exceeds the enumeration cap {DEFAULT_CAP}; "
                         "pass allow_large=True to insist")


def all_codes(n: int, dedup: bool = True, allow_large: bool = False,
              prefix: str = "a") -> list[CodeTree]:
    """All codes reachable by merging pairs of ``a1..an``.

    With ``dedup`` off, one tree per merge trajectory (in generation order).
    With ``dedup`` on, distinct trees up to child swaps, sorted by their
    normalized canonical string.
    """
    _check(n, allow_large)
    if dedup:
        return _distinct_codes(n, prefix)
    level: list[tuple[CodeTree, ...]] = [
        tuple(Leaf(f"{prefix}{i + 1}") for i in range(n))]
    for _ in range(n - 1):
        nxt = []
        for state in level:
            for j in range(len(state)):
                for k in range(j + 1, len(state)):
                    rest = state[:j] + state[j + 1:k] + state[k + 1:]
                    nxt.append(rest + (Node(state[j], state[k]),))
        level = nxt
    return [state[0] for state in level]


def _distinct_codes(n: int, prefix: str) -> list[CodeTree]:
    # Dedup every level: states are multisets of subtrees, so normalizing
    # them loses nothing and keeps the frontier small.
    level = {tuple(Leaf(f"{prefix}{i + 1}") for i in range(n))}
    for _ in range(n - 1):
        nxt = set()
        for state in level:
            for j in range(len(state)):
                for k in range(j + 1, len(state)):
                    rest = state[:j] + state[j + 1:k] + state[k + 1:]
                    merged = normalize(Node(state[j], state[k]))
                    nxt.add(tuple(sorted(rest + (merged,), key=str)))
        level = nxt
    return sorted((state[0] for state in level), key=str)
