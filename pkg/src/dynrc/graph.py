"""Evolving graph data model.

An evolving graph is a fixed vertex set ``{0, ..., n-1}`` plus one edge set per
time instant. Two lifetimes are supported:

* :class:`FiniteGraph` -- an explicit list of snapshots with strictly
  increasing times (gaps are allowed and carry no edges);
* :class:`PeriodicGraph` -- a finite prefix followed by a cycle of snapshots
  repeated forever. This is how infinite lifetimes are encoded: an edge is
  present infinitely often exactly when it belongs to some cycle snapshot.

Snapshot ``i`` of the prefix sits at time ``origin + i``; cycle entry ``r``
sits at times ``origin + len(prefix) + r + m * period`` for every ``m >= 0``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import EmptyInterval, OutOfLifetime

Edge = tuple[int, int]
EdgeSet = frozenset[Edge]

EMPTY: EdgeSet = frozenset()


def make_edge(u: int, v: int) -> Edge:
    if u == v:
        raise ValueError(f"self-loop on node {u}")
    return (u, v) if u < v else (v, u)


def edge_set(edges: Iterable[Sequence[int]]) -> EdgeSet:
    return frozenset(make_edge(int(u), int(v)) for u, v in edges)


def _check_nodes(n: int, edges: EdgeSet) -> None:
    for u, v in edges:
        if u < 0 or v >= n:
            raise ValueError(f"edge {(u, v)} has an endpoint outside [0, {n})")


@dataclass(frozen=True)
class Snapshot:
    time: int
    edges: EdgeSet

    def neighbors(self, node: int) -> frozenset[int]:
        return frozenset(v if u == node else u for u, v in self.edges if node in (u, v))


@dataclass(frozen=True)
class TimeInterval:
    """Closed interval ``[start, end]``; ``end=None`` stands for ``[start, *]``."""

    start: int
    end: int | None = None

    def __post_init__(self):
        if self.start < 0:
            raise ValueError("interval start must be >= 0")
        if self.end is not None and self.end < self.start:
            raise ValueError(f"interval [{self.start}, {self.end}] is reversed")

    def __contains__(self, j: int) -> bool:
        return j >= self.start and (self.end is None or j <= self.end)


@dataclass(frozen=True)
class UnderlyingGraph:
    """A static undirected graph on ``{0, ..., n-1}``."""

    n: int
    edges: EdgeSet

    def adjacency(self) -> dict[int, set[int]]:
        adj: dict[int, set[int]] = {v: set() for v in range(self.n)}
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return adj

    def induced(self, keep: Iterable[int]) -> "UnderlyingGraph":
        keep = frozenset(keep)
        return UnderlyingGraph(self.n, frozenset(e for e in self.edges if e[0] in keep and e[1] in keep))

    def is_complete(self) -> bool:
        return len(self.edges) == self.n * (self.n - 1) // 2


class EvolvingGraph:
    """Common interface of the two lifetime representations."""

    n: int

    @property
    def is_periodic(self) -> bool:
        return isinstance(self, PeriodicGraph)

    @property
    def first_time(self) -> int:
        raise NotImplementedError

    @property
    def last_time(self) -> int | None:
        """Last instant of the lifetime, ``None`` when infinite."""
        raise NotImplementedError

    def edges_at(self, j: int) -> EdgeSet:
        """Edges present at ``j``; empty outside the lifetime (never raises)."""
        raise NotImplementedError

    def snapshots(self) -> Iterator[Snapshot]:
        """Every stored snapshot (prefix then one cycle for periodic graphs)."""
        raise NotImplementedError

    def map_edges(self, fn) -> "EvolvingGraph":
        raise NotImplementedError

    def relabel(self, perm: Sequence[int]) -> "EvolvingGraph":
        """Rename node ``v`` to ``perm[v]`` everywhere."""
        if sorted(perm) != list(range(self.n)):
            raise ValueError("perm must be a permutation of range(n)")
        return self.map_edges(lambda es: frozenset(make_edge(perm[u], perm[v]) for u, v in es))

    def canonical(self) -> "EvolvingGraph":
        return self


@dataclass(frozen=True)
class FiniteGraph(EvolvingGraph):
    n: int
    snapshot_list: tuple[Snapshot, ...]
    _by_time: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("n must be >= 0")
        snaps = tuple(self.snapshot_list)
        prev = None
        for s in snaps:
            if s.time < 0:
                raise ValueError("snapshot times must be >= 0")
            if prev is not None and s.time <= prev:
                raise ValueError(f"snapshot times not strictly increasing at {s.time}")
            prev = s.time
            _check_nodes(self.n, s.edges)
        object.__setattr__(self, "snapshot_list", snaps)
        object.__setattr__(self, "_by_time", {s.time: s.edges for s in snaps})

    @property
    def first_time(self) -> int:
        if not self.snapshot_list:
            raise OutOfLifetime("graph has an empty lifetime")
        return self.snapshot_list[0].time

    @property
    def last_time(self) -> int:
        if not self.snapshot_list:
            raise OutOfLifetime("graph has an empty lifetime")
        return self.snapshot_list[-1].time

    @property
    def times(self) -> tuple[int, ...]:
        return tuple(s.time for s in self.snapshot_list)

    def edges_at(self, j: int) -> EdgeSet:
        return self._by_time.get(j, EMPTY)

    def snapshots(self) -> Iterator[Snapshot]:
        return iter(self.snapshot_list)

    def map_edges(self, fn) -> "FiniteGraph":
        return FiniteGraph(self.n, tuple(Snapshot(s.time, fn(s.edges)) for s in self.snapshot_list))

    def canonical(self) -> "FiniteGraph":
        # the .teg format cannot express an edgeless snapshot in a finite lifetime
        return FiniteGraph(self.n, tuple(s for s in self.snapshot_list if s.edges))


@dataclass(frozen=True)
class PeriodicGraph(EvolvingGraph):
    n: int
    prefix: tuple[EdgeSet, ...]
    cycle: tuple[EdgeSet, ...]
    origin: int = 0

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("n must be >= 0")
        if not self.cycle:
            raise ValueError("cycle must contain at least one snapshot")
        if self.origin < 0:
            raise ValueError("origin must be >= 0")
        prefix = tuple(frozenset(es) for es in self.prefix)
        cycle = tuple(frozenset(es) for es in self.cycle)
        for es in prefix + cycle:
            _check_nodes(self.n, es)
        object.__setattr__(self, "prefix", prefix)
        object.__setattr__(self, "cycle", cycle)

    @property
    def period(self) -> int:
        return len(self.cycle)

    @property
    def prefix_end(self) -> int:
        """First instant governed by the cycle."""
        return self.origin + len(self.prefix)

    @property
    def first_time(self) -> int:
        return self.origin

    @property
    def last_time(self) -> None:
        return None

    def edges_at(self, j: int) -> EdgeSet:
        if j < self.origin:
            return EMPTY
        if j < self.prefix_end:
            return self.prefix[j - self.origin]
        return self.cycle[(j - self.prefix_end) % self.period]

    def snapshots(self) -> Iterator[Snapshot]:
        for j in range(self.origin, self.prefix_end + self.period):
            yield Snapshot(j, self.edges_at(j))

    def map_edges(self, fn) -> "PeriodicGraph":
        return PeriodicGraph(
            self.n, tuple(fn(es) for es in self.prefix), tuple(fn(es) for es in self.cycle), self.origin
        )

    def recurrent_edges(self) -> EdgeSet:
        return frozenset().union(*self.cycle)


def finite_graph(n: int, schedule: Mapping[int, Iterable[Sequence[int]]]) -> FiniteGraph:
    """Build a finite graph from ``{time: [(u, v), ...]}``."""
    return FiniteGraph(n, tuple(Snapshot(t, edge_set(schedule[t])) for t in sorted(schedule)))


def periodic_graph(
    n: int,
    prefix: Sequence[Iterable[Sequence[int]]],
    cycle: Sequence[Iterable[Sequence[int]]],
    origin: int = 0,
) -> PeriodicGraph:
    return PeriodicGraph(n, tuple(edge_set(es) for es in prefix), tuple(edge_set(es) for es in cycle), origin)


def snapshot_at(g: EvolvingGraph, j: int) -> Snapshot:
    if isinstance(g, FiniteGraph):
        if not g.snapshot_list or j > g.last_time or j < g.first_time:
            raise OutOfLifetime(f"time {j} outside the finite lifetime of the graph")
    elif j < g.first_time:
        raise OutOfLifetime(f"time {j} precedes the lifetime origin {g.first_time}")
    return Snapshot(j, g.edges_at(j))


def temporal_subgraph(g: EvolvingGraph, interval: TimeInterval) -> EvolvingGraph:
    """Restrict the lifetime of ``g`` to ``interval``; absolute times are kept."""
    if isinstance(g, FiniteGraph):
        kept = tuple(s for s in g.snapshot_list if s.time in interval)
        if not kept:
            raise EmptyInterval(f"no snapshot of the graph lies in {interval}")
        return FiniteGraph(g.n, kept)
    assert isinstance(g, PeriodicGraph)
    start = max(interval.start, g.origin)
    if interval.end is not None:
        if interval.end < start:
            raise EmptyInterval(f"{interval} ends before the lifetime origin")
        return FiniteGraph(g.n, tuple(Snapshot(j, g.edges_at(j)) for j in range(start, interval.end + 1)))
    if start < g.prefix_end:
        return PeriodicGraph(g.n, g.prefix[start - g.origin:], g.cycle, start)
    shift = (start - g.prefix_end) % g.period
    return PeriodicGraph(g.n, (), g.cycle[shift:] + g.cycle[:shift], start)


def spatial_subgraph(g: EvolvingGraph, keep: Iterable[int]) -> EvolvingGraph:
    """Keep every node but only the edges with both endpoints in ``keep``."""
    keep = frozenset(keep)
    bad = [v for v in keep if not 0 <= v < g.n]
    if bad:
        raise ValueError(f"nodes {sorted(bad)} are not in the graph")
    return g.map_edges(lambda es: frozenset(e for e in es if e[0] in keep and e[1] in keep))


def underlying_graph(g: EvolvingGraph) -> UnderlyingGraph:
    edges = frozenset().union(*(s.edges for s in g.snapshots()))
    return UnderlyingGraph(g.n, edges)
