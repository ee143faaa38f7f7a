"""Reader and writer for the line-oriented ``.teg`` evolving-graph format.

::

    teg 1
    n 4
    lifetime finite                  # or: lifetime periodic <prefix_len> <period>
    e 1 0 1                          # e <time> <u> <v>, u < v
    e 1 0 2

Lines are ordered by non-decreasing time; ``#`` starts a comment. For periodic
graphs, times ``[0, prefix_len)`` hold the prefix and
``[prefix_len, prefix_len + period)`` one copy of the cycle. A fourth integer
on the lifetime line shifts all of this by a lifetime origin (omitted when 0).
"""

from __future__ import annotations

from pathlib import Path

from .errors import ParseError
from .graph import EvolvingGraph, FiniteGraph, PeriodicGraph, Snapshot


def _ints(tokens: list[str], lineno: int, what: str) -> list[int]:
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise ParseError(lineno, f"non-integer {what}: {' '.join(tokens)!r}") from None


def parse_teg(text: str) -> EvolvingGraph:
    lines = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if body:
            lines.append((lineno, body.split()))

    if not lines or lines[0][1] != ["teg", "1"]:
        raise ParseError(lines[0][0] if lines else 1, "missing 'teg 1' header")
    if len(lines) < 2 or lines[1][1][0] != "n" or len(lines[1][1]) != 2:
        raise ParseError(lines[1][0] if len(lines) > 1 else 2, "missing 'n <count>' line")
    (n,) = _ints(lines[1][1][1:], lines[1][0], "node count")
    if n < 0:
        raise ParseError(lines[1][0], "node count must be >= 0")
    if len(lines) < 3 or lines[2][1][0] != "lifetime":
        raise ParseError(lines[2][0] if len(lines) > 2 else 3, "missing 'lifetime' line")

    lt_line, lt = lines[2]
    if lt[1:] == ["finite"]:
        periodic = None
    elif len(lt) in (4, 5) and lt[1] == "periodic":
        vals = _ints(lt[2:], lt_line, "lifetime parameters")
        prefix_len, period = vals[0], vals[1]
        origin = vals[2] if len(vals) == 3 else 0
        if prefix_len < 0 or period < 1 or origin < 0:
            raise ParseError(lt_line, "periodic lifetime needs prefix_len >= 0, period >= 1, origin >= 0")
        periodic = (prefix_len, period, origin)
    else:
        raise ParseError(lt_line, f"unknown lifetime {' '.join(lt[1:])!r}")

    by_time: dict[int, set[tuple[int, int]]] = {}
    last = None
    for lineno, toks in lines[3:]:
        if toks[0] != "e" or len(toks) != 4:
            raise ParseError(lineno, f"expected 'e <time> <u> <v>', got {' '.join(toks)!r}")
        t, u, v = _ints(toks[1:], lineno, "edge fields")
        if last is not None and t < last:
            raise ParseError(lineno, f"time {t} decreases (previous {last})")
        last = t
        if t < 0:
            raise ParseError(lineno, "negative time")
        for node in (u, v):
            if not 0 <= node < n:
                raise ParseError(lineno, f"bad node id {node} for n={n}")
        if u >= v:
            raise ParseError(lineno, f"edge endpoints must satisfy u < v, got {u} {v}")
        if periodic is not None:
            prefix_len, period, origin = periodic
            if not origin <= t < origin + prefix_len + period:
                raise ParseError(lineno, f"time {t} outside the periodic description window")
        slot = by_time.setdefault(t, set())
        if (u, v) in slot:
            raise ParseError(lineno, f"duplicate edge {u} {v} at time {t}")
        slot.add((u, v))

    if periodic is None:
        return FiniteGraph(n, tuple(Snapshot(t, frozenset(es)) for t, es in sorted(by_time.items())))
    prefix_len, period, origin = periodic
    slots = [frozenset(by_time.get(origin + i, ())) for i in range(prefix_len + period)]
    return PeriodicGraph(n, tuple(slots[:prefix_len]), tuple(slots[prefix_len:]), origin)


def serialize_teg(g: EvolvingGraph) -> str:
    out = ["teg 1", f"n {g.n}"]
    if isinstance(g, PeriodicGraph):
        head = f"lifetime periodic {len(g.prefix)} {g.period}"
        out.append(head if g.origin == 0 else f"{head} {g.origin}")
    else:
        out.append("lifetime finite")
    for snap in g.snapshots():
        out.extend(f"e {snap.time} {u} {v}" for u, v in sorted(snap.edges))
    return "\n".join(out) + "\n"


def load_teg(path: str | Path) -> EvolvingGraph:
    return parse_teg(Path(path).read_text())


def dump_teg(g: EvolvingGraph, path: str | Path) -> None:
    Path(path).write_text(serialize_teg(g))
