"""Dynamic minimum cut: the fewest non-endpoint nodes whose removal kills every journey.

Two exact implementations that share no search code:

* ``oracle="sigma"`` -- minimum hitting set of the enumerated Σ family;
* ``oracle="removal"`` -- try node subsets in increasing size and re-run the
  earliest-arrival sweep on the spatial subgraph that remains.

If some journey has no intermediate node, no removal can cut it and the
value is :data:`UNBOUNDED`. With no journey at all the value is 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .errors import LimitExceeded
from .graph import EvolvingGraph, spatial_subgraph
from .hitting import UNBOUNDED, min_hitting_set
from .journeys import SIGMA_NODE_LIMIT, _default_start, enumerate_sigma, journey_exists

REMOVAL_SIZE_LIMIT = 6


def cut_by_sigma(g: EvolvingGraph, s: int, t: int, start: int | None = None, node_limit: int = SIGMA_NODE_LIMIT):
    return min_hitting_set(enumerate_sigma(g, s, t, start, node_limit))[0]


def cut_by_removal(
    g: EvolvingGraph, s: int, t: int, start: int | None = None, size_limit: int = REMOVAL_SIZE_LIMIT
):
    start = _default_start(g, start)
    everyone = frozenset(range(g.n))
    if journey_exists(spatial_subgraph(g, {s, t}), s, t, start):
        return UNBOUNDED
    others = sorted(everyone - {s, t})
    for size in range(len(others) + 1):
        if size > size_limit:
            raise LimitExceeded(f"no cut of size <= {size_limit}; raise size_limit to continue")
        for removed in combinations(others, size):
            if not journey_exists(spatial_subgraph(g, everyone - set(removed)), s, t, start):
                return size
    raise AssertionError("removing every intermediate node must cut a non-direct journey set")


def dyn_min_cut(g: EvolvingGraph, s: int, t: int, start: int | None = None, oracle: str = "sigma"):
    if s == t:
        raise ValueError("dynamic min-cut needs distinct endpoints")
    if oracle == "sigma":
        return cut_by_sigma(g, s, t, start)
    if oracle == "removal":
        return cut_by_removal(g, s, t, start)
    raise ValueError(f"unknown oracle {oracle!r}")


@dataclass(frozen=True)
class CutReport:
    sigma: float
    removal: float

    @property
    def agree(self) -> bool:
        return self.sigma == self.removal

    @property
    def value(self) -> float:
        return self.sigma


def dyn_min_cut_both(g: EvolvingGraph, s: int, t: int, start: int | None = None) -> CutReport:
    return CutReport(cut_by_sigma(g, s, t, start), cut_by_removal(g, s, t, start))


def format_cut(value: float) -> str:
    return "unbounded" if value == UNBOUNDED else str(int(value))
