"""Seeded generators for evolving-graph corpora.

Models (written ``name(key=value, ...)``, e.g. ``harary-interval(n=6,k=3,T=5)``):

``periodic-er(n, period, p)``
    Every cycle snapshot is an independent Erdős–Rényi draw; no prefix.
``harary-interval(n, k, T)``
    A cycle of ``T`` snapshots, each a Harary graph ``H_{k,n}`` under a fresh
    random relabeling, so every snapshot is k-connected.
``recurrent-core(n, k, period, noise)``
    A relabeled ``H_{k,n}`` core whose edges each appear in at least one
    cycle slot, plus Bernoulli(``noise``) transient edges in a prefix of
    ``period`` snapshots (no prefix when ``noise == 0``).
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass, field
from itertools import combinations

from .errors import InvalidSpec
from .graph import EdgeSet, PeriodicGraph, make_edge

_PARAMS = {
    "periodic-er": {"n": int, "period": int, "p": float},
    "harary-interval": {"n": int, "k": int, "T": int},
    "recurrent-core": {"n": int, "k": int, "period": int, "noise": float},
}
_DEFAULTS = {"recurrent-core": {"noise": 0.0}}


@dataclass(frozen=True)
class GeneratorSpec:
    model: str
    params: dict = field(default_factory=dict, hash=False)

    def __str__(self):
        body = ",".join(f"{k}={v}" for k, v in self.params.items())
        return f"{self.model}({body})"


def parse_spec(text: str) -> GeneratorSpec:
    m = re.fullmatch(r"\s*([\w-]+)\s*\((.*)\)\s*", text)
    if not m:
        raise InvalidSpec(f"cannot parse generator spec {text!r}")
    model, body = m.group(1), m.group(2)
    if model not in _PARAMS:
        raise InvalidSpec(f"unknown generator model {model!r}")
    params = dict(_DEFAULTS.get(model, {}))
    for item in filter(None, (x.strip() for x in body.split(","))):
        key, _, value = item.partition("=")
        key = key.strip()
        if key not in _PARAMS[model]:
            raise InvalidSpec(f"{model} has no parameter {key!r}")
        try:
            params[key] = _PARAMS[model][key](value.strip())
        except ValueError:
            raise InvalidSpec(f"bad value for {key}: {value!r}") from None
    missing = set(_PARAMS[model]) - set(params)
    if missing:
        raise InvalidSpec(f"{model} is missing {sorted(missing)}")
    # keep the declared parameter order so str(spec) is stable
    return GeneratorSpec(model, {k: params[k] for k in _PARAMS[model]})


def harary_edges(n: int, k: int) -> set[tuple[int, int]]:
    """Edges of the Harary graph H_{k,n}: k-connected with ceil(kn/2) edges."""
    if not 1 <= k < n:
        raise InvalidSpec(f"Harary graph needs 1 <= k < n (k={k}, n={n})")
    if k == 1:
        return {(i, i + 1) for i in range(n - 1)}
    edges = set()
    half = k // 2
    for i in range(n):
        for d in range(1, half + 1):
            edges.add(make_edge(i, (i + d) % n))
    if k % 2 == 1:
        if n % 2 == 0:
            for i in range(n // 2):
                edges.add(make_edge(i, i + n // 2))
        else:
            # odd k, odd n: diameters from the first (n+1)/2 nodes
            for i in range((n + 1) // 2):
                edges.add(make_edge(i, (i + (n - 1) // 2) % n))
    return edges


def _relabeled(edges, perm) -> EdgeSet:
    return frozenset(make_edge(perm[u], perm[v]) for u, v in edges)


def _periodic_er(rng: random.Random, n: int, period: int, p: float) -> PeriodicGraph:
    if n < 1 or period < 1 or not 0.0 <= p <= 1.0:
        raise InvalidSpec("periodic-er needs n >= 1, period >= 1, 0 <= p <= 1")
    pairs = list(combinations(range(n), 2))
    cycle = tuple(frozenset(e for e in pairs if rng.random() < p) for _ in range(period))
    return PeriodicGraph(n, (), cycle)


def _harary_interval(rng: random.Random, n: int, k: int, T: int) -> PeriodicGraph:
    if T < 1:
        raise InvalidSpec("harary-interval needs T >= 1")
    base = harary_edges(n, k)
    cycle = []
    for _ in range(T):
        perm = list(range(n))
        rng.shuffle(perm)
        cycle.append(_relabeled(base, perm))
    return PeriodicGraph(n, (), tuple(cycle))


def _recurrent_core(rng: random.Random, n: int, k: int, period: int, noise: float) -> PeriodicGraph:
    if period < 1 or not 0.0 <= noise <= 1.0:
        raise InvalidSpec("recurrent-core needs period >= 1 and 0 <= noise <= 1")
    perm = list(range(n))
    rng.shuffle(perm)
    core = sorted(_relabeled(harary_edges(n, k), perm))
    slots: list[set] = [set() for _ in range(period)]
    for e in core:
        chosen = [r for r in range(period) if rng.random() < 0.5] or [rng.randrange(period)]
        for r in chosen:
            slots[r].add(e)
    prefix = ()
    if noise > 0:
        pairs = list(combinations(range(n), 2))
        prefix = tuple(frozenset(e for e in pairs if rng.random() < noise) for _ in range(period))
    return PeriodicGraph(n, prefix, tuple(frozenset(s) for s in slots))


def generate(spec: GeneratorSpec | str, seed: int) -> PeriodicGraph:
    if isinstance(spec, str):
        spec = parse_spec(spec)
    rng = random.Random(seed)
    p = spec.params
    if spec.model == "periodic-er":
        return _periodic_er(rng, p["n"], p["period"], p["p"])
    if spec.model == "harary-interval":
        return _harary_interval(rng, p["n"], p["k"], p["T"])
    if spec.model == "recurrent-core":
        return _recurrent_core(rng, p["n"], p["k"], p["period"], p["noise"])
    raise InvalidSpec(f"unknown generator model {spec.model!r}")


def advertised_class(spec: GeneratorSpec | str) -> tuple[str, int] | None:
    """The (class tag, k) a generator guarantees, if any."""
    if isinstance(spec, str):
        spec = parse_spec(spec)
    if spec.model == "harary-interval":
        return ("CK_star_k", spec.params["k"])
    if spec.model == "recurrent-core":
        return ("E_R_k_subgraph", spec.params["k"])
    if spec.model == "periodic-er" and spec.params["p"] >= 1.0:
        return ("CK_star_k", spec.params["n"] - 1)
    return None
