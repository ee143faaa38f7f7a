"""Membership tests for evolving-graph classes and checks of their inclusion theorems.

Recurrent classes quantify over every start time of an infinite lifetime.
On a periodic graph the suffix ``g[j, *]`` only depends on ``j`` through
``(j - prefix_end) mod period`` once ``j >= prefix_end``, so the start times
``origin .. prefix_end + period - 1`` are exhaustive.

Beyond the prefix, every journey uses recurrent edges only and every simple
path over recurrent edges can be scheduled, so the dynamic min-cut from any
such start equals the static local connectivity of the recurrent-edge graph.
Earlier starts only add journeys. This gives the polynomial decisions
(``Method.POLYNOMIAL``) for the recurrent k-classes; ``exact=True`` runs the
exponential Σ/hitting-set route instead.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from itertools import permutations
from typing import Any

from .connectivity import is_k_connected, local_connectivity
from .cuts import dyn_min_cut
from .errors import HypothesisNotSatisfied, RepresentationMismatch
from .graph import EvolvingGraph, FiniteGraph, PeriodicGraph, TimeInterval, temporal_subgraph, underlying_graph
from .hitting import min_hitting_set
from .journeys import _default_start, enumerate_sigma_journeys, find_journey


class Method(enum.Enum):
    EXACT_EXPONENTIAL = "EXACT"
    POLYNOMIAL = "POLY"


TAGS = (
    "J_st", "TC", "J_R_st", "TC_R", "C_star", "E_R",
    "J_stk", "J_R_stk", "TC_k", "TC_R_k", "E_R_k", "CK_star_k",
)
PAIR_TAGS = {"J_st", "J_R_st", "J_stk", "J_R_stk"}
K_TAGS = {"J_stk", "J_R_stk", "TC_k", "TC_R_k", "E_R_k", "CK_star_k"}
RECURRENT_TAGS = {"J_R_st", "TC_R", "E_R", "J_R_stk", "TC_R_k", "E_R_k"}

ALIASES = {
    "J": "J_st", "J_(s,t)": "J_st", "J^R": "J_R_st", "J^R_(s,t)": "J_R_st", "TC^R": "TC_R",
    "C*": "C_star", "E^R": "E_R", "J_k": "J_stk", "J_(s,t,k)": "J_stk", "J^R_k": "J_R_stk",
    "J^R_(s,t,k)": "J_R_stk", "TC^R_k": "TC_R_k", "E^R_k": "E_R_k", "CK*_k": "CK_star_k",
    "C*_k": "CK_star_k",
}


def canonical_tag(name: str) -> str:
    tag = ALIASES.get(name, name)
    if tag not in TAGS:
        raise ValueError(f"unknown class {name!r}")
    return tag


@dataclass(frozen=True)
class ClassQuery:
    tag: str
    s: int | None = None
    t: int | None = None
    k: int | None = None
    start: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "tag", canonical_tag(self.tag))
        pair = self.tag in PAIR_TAGS
        if pair != (self.s is not None and self.t is not None):
            raise ValueError(f"{self.tag} {'requires' if pair else 'does not take'} s and t")
        if (self.tag in K_TAGS) != (self.k is not None):
            raise ValueError(f"{self.tag} {'requires' if self.tag in K_TAGS else 'does not take'} k")


@dataclass
class MembershipVerdict:
    member: bool
    method: Method
    witness: Any = None
    detail: dict = field(default_factory=dict)


def _require_periodic(g: EvolvingGraph, what: str) -> PeriodicGraph:
    if not isinstance(g, PeriodicGraph):
        raise RepresentationMismatch(f"{what} needs an infinite (periodic) lifetime")
    return g


def recurrent_edge_set(g: EvolvingGraph):
    """Edges present infinitely often: the union of the cycle snapshots."""
    return _require_periodic(g, "recurrent edge set").recurrent_edges()


def representative_starts(g: PeriodicGraph) -> range:
    return range(g.origin, g.prefix_end + g.period)


def _pairs(n: int):
    return list(permutations(range(n), 2))


def has_er_k_subgraph(g: EvolvingGraph, k: int) -> bool:
    """Is ``g[V, recurrent edges]`` in E^R_k?"""
    return is_k_connected(g.n, recurrent_edge_set(g), k)


def _recurrent_cut(g: PeriodicGraph, s: int, t: int) -> float:
    return local_connectivity(g.n, g.recurrent_edges(), s, t)


def _cut_with_witness(g, s, t, start):
    journeys = enumerate_sigma_journeys(g, s, t, start)
    value, hitting = min_hitting_set(journeys)
    return value, journeys, hitting


def _snapshots_k_connected(g: EvolvingGraph, k: int) -> MembershipVerdict:
    for snap in g.snapshots():
        if not is_k_connected(g.n, snap.edges, k):
            return MembershipVerdict(False, Method.POLYNOMIAL, witness={"time": snap.time})
    return MembershipVerdict(True, Method.POLYNOMIAL)


def is_member(g: EvolvingGraph, q: ClassQuery, exact: bool = False) -> MembershipVerdict:
    tag = q.tag
    if tag in RECURRENT_TAGS:
        _require_periodic(g, tag)
    start = _default_start(g, q.start)

    if tag == "J_st":
        j = find_journey(g, q.s, q.t, start)
        return MembershipVerdict(j is not None, Method.POLYNOMIAL, witness=j)

    if tag == "TC":
        for s, t in _pairs(g.n):
            if find_journey(g, s, t, start) is None:
                return MembershipVerdict(False, Method.POLYNOMIAL, witness={"pair": (s, t)})
        return MembershipVerdict(True, Method.POLYNOMIAL)

    if tag in ("J_R_st", "TC_R"):
        pairs = [(q.s, q.t)] if tag == "J_R_st" else _pairs(g.n)
        for j in representative_starts(g):
            for s, t in pairs:
                if find_journey(g, s, t, j) is None:
                    return MembershipVerdict(False, Method.POLYNOMIAL, witness={"start": j, "pair": (s, t)})
        return MembershipVerdict(True, Method.POLYNOMIAL)

    if tag == "C_star":
        return _snapshots_k_connected(g, 1)

    if tag == "CK_star_k":
        return _snapshots_k_connected(g, q.k)

    if tag in ("E_R", "E_R_k"):
        rec = recurrent_edge_set(g)
        transient = underlying_graph(g).edges - rec
        if transient:
            return MembershipVerdict(False, Method.POLYNOMIAL, witness={"transient_edges": sorted(transient)})
        if tag == "E_R_k" and not is_k_connected(g.n, rec, q.k):
            return MembershipVerdict(False, Method.POLYNOMIAL, witness={"recurrent_edges": sorted(rec)})
        return MembershipVerdict(True, Method.POLYNOMIAL, witness=rec)

    if tag == "J_stk":
        value, journeys, hitting = _cut_with_witness(g, q.s, q.t, start)
        if value >= q.k:
            return MembershipVerdict(True, Method.EXACT_EXPONENTIAL, witness=journeys, detail={"cut": value})
        return MembershipVerdict(False, Method.EXACT_EXPONENTIAL, witness=hitting, detail={"cut": value})

    if tag == "TC_k":
        for s, t in _pairs(g.n):
            value, _, hitting = _cut_with_witness(g, s, t, start)
            if value < q.k:
                return MembershipVerdict(
                    False, Method.EXACT_EXPONENTIAL, witness={"pair": (s, t), "cut_set": hitting}, detail={"cut": value}
                )
        return MembershipVerdict(True, Method.EXACT_EXPONENTIAL)

    if tag in ("J_R_stk", "TC_R_k"):
        pairs = [(q.s, q.t)] if tag == "J_R_stk" else _pairs(g.n)
        if not exact:
            rec = g.recurrent_edges()
            if tag == "TC_R_k":
                ok = is_k_connected(g.n, rec, q.k)
                return MembershipVerdict(ok, Method.POLYNOMIAL, witness=rec if ok else None)
            cut = _recurrent_cut(g, q.s, q.t)
            return MembershipVerdict(cut >= q.k, Method.POLYNOMIAL, detail={"cut": cut})
        for j in representative_starts(g):
            for s, t in pairs:
                value = dyn_min_cut(g, s, t, j)
                if value < q.k:
                    return MembershipVerdict(
                        False, Method.EXACT_EXPONENTIAL, witness={"start": j, "pair": (s, t)}, detail={"cut": value}
                    )
        return MembershipVerdict(True, Method.EXACT_EXPONENTIAL)

    raise AssertionError(tag)


@dataclass
class TheoremCheck:
    name: str
    applicable: bool
    passed: bool | None = None
    counterexample: Any = None


def _windows(g: EvolvingGraph, width: int, starts=None) -> list[int]:
    if starts is not None:
        return list(starts)
    if isinstance(g, PeriodicGraph):
        return list(representative_starts(g))
    assert isinstance(g, FiniteGraph)
    times = set(g.times)
    # windows must sit on consecutive lifetime instants
    return [j for j in g.times if all(j + d in times for d in range(width + 1))]


def check_inclusion_theorems(g: EvolvingGraph, k: int, starts=None) -> list[TheoremCheck]:
    """Verify each theorem whose hypothesis ``g`` satisfies, by independent computation.

    * E^R_k spatial subgraph ⇒ TC^R_k (decided by exhaustive dynamic min-cuts);
    * CK*_k ⇒ every window ``g[j, j+n-k]`` is in TC_k;
    * CK*_k with infinite lifetime ⇒ the recurrent edges form a k-connected graph.
    """
    n = g.n
    checks: list[TheoremCheck] = []
    periodic = isinstance(g, PeriodicGraph)

    er_k = periodic and has_er_k_subgraph(g, k)
    chk = TheoremCheck("E^R_k subgraph => TC^R_k", er_k)
    if er_k:
        verdict = is_member(g, ClassQuery("TC_R_k", k=k), exact=True)
        chk.passed = verdict.member
        chk.counterexample = None if verdict.member else verdict.witness
    checks.append(chk)

    ck = is_member(g, ClassQuery("CK_star_k", k=k)).member and k < n
    width = n - k
    chk = TheoremCheck("CK*_k => window TC_k (latency n-k)", ck)
    if ck:
        chk.passed = True
        for j in _windows(g, width, starts):
            window = temporal_subgraph(g, TimeInterval(j, j + width))
            for s, t in _pairs(n):
                value = dyn_min_cut(window, s, t, j)
                if value < k:
                    chk.passed = False
                    chk.counterexample = {"start": j, "pair": (s, t), "cut": value}
                    break
            if not chk.passed:
                break
    checks.append(chk)

    chk = TheoremCheck("CK*_k infinite => recurrent edges k-connected", ck and periodic)
    if chk.applicable:
        chk.passed = is_k_connected(n, g.recurrent_edges(), k)
        if not chk.passed:
            chk.counterexample = {"recurrent_edges": sorted(g.recurrent_edges())}
    checks.append(chk)

    if not any(c.applicable for c in checks):
        raise HypothesisNotSatisfied(f"no inclusion theorem applies to this graph with k={k}")
    return checks

