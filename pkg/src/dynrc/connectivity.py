"""Static vertex connectivity by unit-capacity max-flow on the node-split graph."""

from __future__ import annotations

import math
from collections import deque
from itertools import combinations
from typing import Iterable

from .graph import Edge, UnderlyingGraph


def _adjacency(n: int, edges: Iterable[Edge]) -> list[set[int]]:
    adj = [set() for _ in range(n)]
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    return adj


def _split_flow(adj: list[set[int]], s: int, t: int) -> tuple[int, dict]:
    """Max number of internally vertex-disjoint s-t paths (s, t non-adjacent).

    Vertex v becomes ``(v, 0) -> (v, 1)`` with capacity 1; each undirected
    edge becomes two arcs ``(u, 1) -> (v, 0)`` of capacity 1.
    """
    cap: dict[tuple, dict[tuple, int]] = {}

    def arc(a, b, c):
        cap.setdefault(a, {})
        cap.setdefault(b, {})
        cap[a][b] = cap[a].get(b, 0) + c
        cap[b].setdefault(a, 0)

    big = len(adj)
    for v in range(len(adj)):
        arc((v, 0), (v, 1), big if v in (s, t) else 1)
        for w in adj[v]:
            arc((v, 1), (w, 0), 1)
    source, sink = (s, 1), (t, 0)
    flow = 0
    while True:
        parent = {source: None}
        queue = deque([source])
        while queue and sink not in parent:
            a = queue.popleft()
            for b, c in cap[a].items():
                if c > 0 and b not in parent:
                    parent[b] = a
                    queue.append(b)
        if sink not in parent:
            return flow, cap
        b = sink
        while parent[b] is not None:
            a = parent[b]
            cap[a][b] -= 1
            cap[b][a] += 1
            b = a
        flow += 1


def local_connectivity(n: int, edges: Iterable[Edge], s: int, t: int) -> float:
    """Fewest nodes other than s, t separating them; ``math.inf`` if adjacent."""
    adj = _adjacency(n, edges)
    if t in adj[s]:
        return math.inf
    flow, _ = _split_flow(adj, s, t)
    return flow


def disjoint_paths(n: int, edges: Iterable[Edge], s: int, t: int) -> list[list[int]]:
    """A maximum family of internally vertex-disjoint s-t paths.

    A direct edge counts as one path; the remaining paths avoid it.
    """
    adj = _adjacency(n, edges)
    paths = []
    if t in adj[s]:
        paths.append([s, t])
        adj[s].discard(t)
        adj[t].discard(s)
    _, cap = _split_flow(adj, s, t)
    # arcs (u,1)->(w,0) with positive reverse residual carry flow
    used = {}
    for v in range(n):
        for w in adj[v]:
            if cap[(w, 0)][(v, 1)] > 0 and cap[(v, 1)][(w, 0)] == 0:
                used.setdefault(v, []).append(w)
    for first in used.get(s, []):
        path = [s, first]
        while path[-1] != t:
            path.append(used[path[-1]].pop())
        paths.append(path)
    return paths


def node_connectivity(n: int, edges: Iterable[Edge]) -> int:
    """Vertex connectivity; ``K_n`` gives ``n - 1`` and a disconnected graph 0."""
    edges = list(edges)
    if n < 2:
        return 0
    adj = _adjacency(n, edges)
    if sum(len(a) for a in adj) == n * (n - 1):
        return n - 1
    best = n - 1
    for s, t in combinations(range(n), 2):
        if t in adj[s]:
            continue
        flow, _ = _split_flow(adj, s, t)
        best = min(best, flow)
        if best == 0:
            break
    return best


def is_k_connected(n: int, edges: Iterable[Edge], k: int) -> bool:
    """k-connectivity in the "removing any k-1 nodes leaves it connected" sense.

    Complete graphs satisfy this for every k, since no proper node subset of
    size k-1 can disconnect them.
    """
    if k <= 0:
        return True
    edges = list(edges)
    if n < 2:
        return n == 1
    if len(set(edges)) == n * (n - 1) // 2:
        return True
    return node_connectivity(n, edges) >= k


def graph_connectivity(g: UnderlyingGraph) -> int:
    return node_connectivity(g.n, g.edges)
