"""Temporal reachability: journeys, earliest arrival and the Σ node-set family.

A journey uses one edge per instant, at strictly increasing instants, over
distinct nodes. Everything here sweeps the time-expanded graph between a
start time and a finite horizon; for periodic graphs the horizon returned by
:func:`effective_horizon` is large enough that no journey is lost.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass
from typing import Iterable

from .errors import LimitExceeded
from .graph import Edge, EvolvingGraph, FiniteGraph, PeriodicGraph

UNREACHED = math.inf
REACHED_AT_START = -math.inf

SIGMA_NODE_LIMIT = 16


@dataclass(frozen=True)
class Journey:
    nodes: tuple[int, ...]
    times: tuple[int, ...]

    def __post_init__(self):
        if len(self.times) != len(self.nodes) - 1:
            raise ValueError("a journey needs exactly one time per hop")
        if len(set(self.nodes)) != len(self.nodes):
            raise ValueError("journey nodes must be distinct")
        if any(a >= b for a, b in zip(self.times, self.times[1:])):
            raise ValueError("journey times must be strictly increasing")

    @property
    def intermediates(self) -> frozenset[int]:
        return frozenset(self.nodes[1:-1])

    def is_valid_in(self, g: EvolvingGraph, start: int | None = None) -> bool:
        if start is not None and self.times and self.times[0] < start:
            return False
        return all(
            (min(u, v), max(u, v)) in g.edges_at(j)
            for u, v, j in zip(self.nodes, self.nodes[1:], self.times)
        )


def effective_horizon(g: EvolvingGraph, start: int) -> int:
    """Last instant a journey starting at ``start`` ever needs.

    Finite graphs: the last snapshot time. Periodic graphs: a journey has at
    most n-1 hops and every cycle edge recurs within one period, so
    ``max(start, prefix_end) + n * period`` suffices.
    """
    if isinstance(g, FiniteGraph):
        return g.last_time if g.snapshot_list else start
    assert isinstance(g, PeriodicGraph)
    return max(start, g.prefix_end) + g.n * g.period


def _default_start(g: EvolvingGraph, start: int | None) -> int:
    if start is not None:
        return start
    try:
        return g.first_time
    except Exception:
        return 0


def _sweep(g: EvolvingGraph, s: int, start: int, horizon: int):
    arrival: dict[int, float] = {v: UNREACHED for v in range(g.n)}
    arrival[s] = REACHED_AT_START
    parent: dict[int, tuple[int, int]] = {}
    reached = {s}
    for j in range(start, horizon + 1):
        fresh = []
        for u, v in g.edges_at(j):
            if u in reached and v not in reached:
                fresh.append((v, u))
            elif v in reached and u not in reached:
                fresh.append((u, v))
        for v, u in sorted(fresh):
            if v not in parent:
                parent[v] = (u, j)
                arrival[v] = j
        # nodes reached at j may only forward from j+1 on
        reached.update(parent)
        if len(reached) == g.n:
            break
    return arrival, parent


def earliest_arrival(g: EvolvingGraph, s: int, start: int, horizon: int | None = None) -> dict[int, float]:
    """Earliest last-edge time of a journey from ``s`` to every node.

    Unreachable nodes map to :data:`UNREACHED`, ``s`` itself to
    :data:`REACHED_AT_START`.
    """
    if horizon is None:
        horizon = effective_horizon(g, start)
    arrival, _ = _sweep(g, s, start, horizon)
    return arrival


def find_journey(g: EvolvingGraph, s: int, t: int, start: int | None = None) -> Journey | None:
    """An earliest-arrival journey from ``s`` to ``t`` in ``g[start, *]``."""
    start = _default_start(g, start)
    if s == t:
        return Journey((s,), ())
    _, parent = _sweep(g, s, start, effective_horizon(g, start))
    if t not in parent:
        return None
    nodes, times = [t], []
    while nodes[-1] != s:
        u, j = parent[nodes[-1]]
        nodes.append(u)
        times.append(j)
    return Journey(tuple(reversed(nodes)), tuple(reversed(times)))


def journey_exists(g: EvolvingGraph, s: int, t: int, start: int | None = None) -> bool:
    if s == t:
        return True
    start = _default_start(g, start)
    arrival = earliest_arrival(g, s, start, effective_horizon(g, start))
    return arrival[t] != UNREACHED


class _EdgeTimes:
    """Sorted presence times of every edge inside ``[start, horizon]``."""

    def __init__(self, g: EvolvingGraph, start: int, horizon: int):
        times: dict[Edge, list[int]] = {}
        adj: dict[int, set[int]] = {v: set() for v in range(g.n)}
        for j in range(start, horizon + 1):
            for e in g.edges_at(j):
                times.setdefault(e, []).append(j)
                adj[e[0]].add(e[1])
                adj[e[1]].add(e[0])
        self.times = times
        self.adj = {v: sorted(ns) for v, ns in adj.items()}

    def next_after(self, u: int, v: int, after: int) -> int | None:
        ts = self.times[(u, v) if u < v else (v, u)]
        i = bisect_right(ts, after)
        return ts[i] if i < len(ts) else None


def minimal_sets(sets: Iterable[frozenset]) -> list[frozenset]:
    """Drop every set that is a proper superset of another (and duplicates)."""
    uniq = sorted(set(sets), key=lambda x: (len(x), sorted(x)))
    kept: list[frozenset] = []
    for s in uniq:
        if not any(k <= s for k in kept):
            kept.append(s)
    return kept


def enumerate_sigma_journeys(
    g: EvolvingGraph,
    s: int,
    t: int,
    start: int | None = None,
    node_limit: int = SIGMA_NODE_LIMIT,
) -> dict[frozenset[int], Journey]:
    """Minimal intermediate-node sets of journeys s ⇝ t, each with a witness.

    Depth-first over simple node sequences. Each hop takes the earliest
    presence of its edge after the previous hop: a node sequence is a journey
    iff this greedy schedule exists, so no journey is missed. A branch is cut
    as soon as its intermediate set already contains a recorded set.
    """
    if g.n > node_limit:
        raise LimitExceeded(f"Σ enumeration limited to n <= {node_limit} (n={g.n})")
    if s == t:
        raise ValueError("Σ is defined for distinct endpoints")
    start = _default_start(g, start)
    et = _EdgeTimes(g, start, effective_horizon(g, start))
    found: dict[frozenset[int], Journey] = {}

    def dominated(inter: frozenset[int]) -> bool:
        return any(k <= inter for k in found)

    # seen[(node, inter)] = earliest arrival time already explored for that state
    seen: dict[tuple[int, frozenset[int]], int] = {}

    def dfs(u: int, at: int, path: list[int], times: list[int], inter: frozenset[int]):
        for v in et.adj[u]:
            if v in path:
                continue
            j = et.next_after(u, v, at)
            if j is None:
                continue
            if v == t:
                if not dominated(inter):
                    for k in [k for k in found if inter < k]:
                        del found[k]
                    found[inter] = Journey(tuple(path + [v]), tuple(times + [j]))
                continue
            nxt = inter | {v}
            if dominated(nxt):
                continue
            key = (v, nxt)
            if seen.get(key, math.inf) <= j:
                continue
            seen[key] = j
            path.append(v)
            times.append(j)
            dfs(v, j, path, times, nxt)
            path.pop()
            times.pop()

    dfs(s, start - 1, [s], [], frozenset())
    return found


def enumerate_sigma(
    g: EvolvingGraph, s: int, t: int, start: int | None = None, node_limit: int = SIGMA_NODE_LIMIT
) -> list[frozenset[int]]:
    """Minimal antichain of Σ(g[start, *], s, t), sorted by size then content."""
    return minimal_sets(enumerate_sigma_journeys(g, s, t, start, node_limit))
