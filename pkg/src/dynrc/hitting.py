"""Exact minimum hitting set (MinCut of a node-set family) by branch and bound."""

from __future__ import annotations

import math
from typing import Iterable

UNBOUNDED = math.inf


def _normalize(family: Iterable[Iterable[int]]) -> list[frozenset[int]]:
    sets = {frozenset(s) for s in family}
    # supersets never change the optimum
    ordered = sorted(sets, key=lambda x: (len(x), sorted(x)))
    kept: list[frozenset[int]] = []
    for s in ordered:
        if not any(k <= s for k in kept):
            kept.append(s)
    return kept


def _packing_bound(sets: list[frozenset[int]]) -> int:
    """Size of a greedy packing of pairwise disjoint sets: a lower bound."""
    used: set[int] = set()
    count = 0
    for s in sorted(sets, key=len):
        if used.isdisjoint(s):
            used |= s
            count += 1
    return count


def _can_hit(sets: list[frozenset[int]], budget: int, allowed: frozenset[int] | None = None) -> bool:
    """Is there a hitting set of size <= budget drawing only from ``allowed``?"""
    if not sets:
        return True
    if budget <= 0:
        return False
    if _packing_bound(sets) > budget:
        return False
    pivot = min(sets, key=lambda s: (len(s), sorted(s)))
    for e in sorted(pivot):
        if allowed is not None and e not in allowed:
            continue
        rest = [s for s in sets if e not in s]
        if _can_hit(rest, budget - 1, allowed):
            return True
    return False


def _min_size(sets: list[frozenset[int]]) -> int:
    """Branch and bound on the elements of the smallest unhit set."""
    best = len(frozenset().union(*sets)) if sets else 0

    def branch(rest: list[frozenset[int]], depth: int):
        nonlocal best
        if not rest:
            best = min(best, depth)
            return
        if depth + _packing_bound(rest) >= best:
            return
        pivot = min(rest, key=lambda s: (len(s), sorted(s)))
        for e in sorted(pivot):
            branch([s for s in rest if e not in s], depth + 1)

    branch(sets, 0)
    return best


def min_hitting_set(family: Iterable[Iterable[int]]) -> tuple[float, frozenset[int] | None]:
    """Minimum hitting set size and the lexicographically smallest witness.

    A family containing the empty set cannot be hit: the result is
    ``(UNBOUNDED, None)``. The empty family is hit by the empty set.
    """
    sets = _normalize(family)
    if not sets:
        return 0, frozenset()
    if not sets[0]:
        return UNBOUNDED, None
    k = _min_size(sets)
    # fix elements one by one, smallest first, keeping a size-k completion possible
    chosen: list[int] = []
    rest = sets
    universe = sorted(frozenset().union(*sets))
    for e in universe:
        if len(chosen) == k:
            break
        after = [s for s in rest if e not in s]
        allowed = frozenset(x for x in universe if x > e)
        if _can_hit(after, k - len(chosen) - 1, allowed):
            chosen.append(e)
            rest = after
    assert not rest and len(chosen) == k
    return k, frozenset(chosen)


def min_cut(family: Iterable[Iterable[int]]) -> float:
    return min_hitting_set(family)[0]


def exceeds(family: Iterable[Iterable[int]], f: int) -> bool:
    """``MinCut(family) > f``, decided without computing the optimum."""
    sets = _normalize(family)
    if sets and not sets[0]:
        return True
    return not _can_hit(sets, f)
