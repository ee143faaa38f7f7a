"""Byzantine behaviours.

A strategy only sees what its own nodes saw: tuples they received, their
neighbours and the current step. Coordinated strategies share state
between their own nodes and nothing else. Two rules are enforced by the
harness rather than trusted to strategies: under authenticated links the
receiver appends the true sender id, and under authenticated messages a
node can only mint tokens in its own name.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable

from .protocol import AlTuple, AmTuple, SignatureToken, content_digest, tuple_key

FORGED = b"forged"


@dataclass
class AdversaryContext:
    n: int
    byzantine: tuple[int, ...]
    f: int
    authenticated_messages: bool
    source: int
    content: Any
    sign: Callable[[int, Any], SignatureToken]

    @property
    def correct(self) -> tuple[int, ...]:
        return tuple(v for v in range(self.n) if v not in self.byzantine)


@dataclass
class ByzantineNode:
    id: int
    known: list = field(default_factory=list)
    _seen: set = field(default_factory=set)
    tokens: list = field(default_factory=list)

    def observe(self, sender: int, payload, authenticated_messages: bool):
        for tp in payload:
            if not authenticated_messages:
                tp = AlTuple(tp.source, tp.content, frozenset(tp.traversed) | {sender})
            elif tp.token not in self.tokens:
                self.tokens.append(tp.token)
            if tp not in self._seen:
                self._seen.add(tp)
                self.known.append(tp)


class Strategy:
    name = "?"

    def bind(self, ctx: AdversaryContext) -> None:
        self.ctx = ctx

    def act(self, node: ByzantineNode, step: int, neighbors: frozenset[int]) -> dict[int, list]:
        """Payload per neighbour; missing neighbours get nothing."""
        raise NotImplementedError

    def __repr__(self):
        return self.name


class Silent(Strategy):
    name = "SILENT"

    def act(self, node, step, neighbors):
        return {}


class Forge(Strategy):
    """Fabricate tuples for ``(source, content)`` every step."""

    name = "FORGE"

    def __init__(self, source: int | None = None, content: Any = FORGED):
        self.forged_source = source
        self.forged_content = content

    def bind(self, ctx):
        super().bind(ctx)
        if self.forged_source is None:
            self.forged_source = ctx.source
        self._own: dict[int, SignatureToken] = {}

    def own_token(self, b: int) -> SignatureToken:
        if b not in self._own:
            self._own[b] = self.ctx.sign(b, self.forged_content)
        return self._own[b]

    def _sets(self, node: ByzantineNode, recipient: int) -> list[frozenset]:
        s = self.forged_source
        others = [x for x in self.ctx.correct if x not in (s, recipient)]
        return [frozenset({s})] + [frozenset({s, x}) for x in others]

    def _tokens(self, node: ByzantineNode) -> list[SignatureToken]:
        c = self.forged_content
        fake = SignatureToken(self.forged_source, content_digest(c), -1)
        return [fake, self.own_token(node.id)] + node.tokens

    def act(self, node, step, neighbors):
        s, c = self.forged_source, self.forged_content
        out = {}
        if self.ctx.authenticated_messages:
            payload = [AmTuple(s, c, tok) for tok in self._tokens(node)]
            return {v: payload for v in neighbors}
        for v in neighbors:
            out[v] = [AlTuple(s, c, S) for S in self._sets(node, v)]
        return out


class Collude(Forge):
    """All Byzantine nodes forge the same tuple with pairwise disjoint sets."""

    name = "COLLUDE"

    def bind(self, ctx):
        super().bind(ctx)
        pool = [x for x in ctx.correct if x != self.forged_source]
        self.chunks = {b: pool[i :: len(ctx.byzantine)] for i, b in enumerate(ctx.byzantine)}
        self.shared_tokens: list[SignatureToken] = []

    def _sets(self, node, recipient):
        s = self.forged_source
        mine = [x for x in self.chunks[node.id] if x != recipient]
        return [frozenset({s}), frozenset({s, *mine})] + [frozenset({s, x}) for x in mine]

    def _tokens(self, node):
        for tok in node.tokens + [self.own_token(node.id)]:
            if tok not in self.shared_tokens:
                self.shared_tokens.append(tok)
        fake = SignatureToken(self.forged_source, content_digest(self.forged_content), -1)
        return [fake] + self.shared_tokens


class ReplayDrop(Strategy):
    """Relay everything received, except the instance's own content."""

    name = "REPLAY-DROP"

    def act(self, node, step, neighbors):
        target = (self.ctx.source, self.ctx.content)
        relay = [tp for tp in node.known if (tp.source, tp.content) != target]
        if self.ctx.authenticated_messages:
            # replay genuine tokens under the target source and a different content
            relay += [AmTuple(self.ctx.source, FORGED, tok) for tok in node.tokens]
        relay.sort(key=tuple_key)
        return {v: [tp for tp in relay if not isinstance(tp, AlTuple) or v not in tp.traversed] for v in neighbors}


STRATEGIES = {"SILENT": Silent, "FORGE": Forge, "COLLUDE": Collude, "REPLAY-DROP": ReplayDrop}


def make_strategy(name: str) -> Strategy:
    try:
        return STRATEGIES[name.upper()]()
    except KeyError:
        raise ValueError(f"unknown adversary {name!r}; choose from {', '.join(STRATEGIES)}") from None
