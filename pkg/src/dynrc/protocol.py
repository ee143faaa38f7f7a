"""Per-process state machines for reliable communication over an evolving graph.

``ALG1`` stores every received tuple with the sender's id appended and
multicasts its tuple set whenever that set or the neighbourhood changes.
``ALG2`` is the same process but multicasts at every step. ``ALG3`` works
with authenticated messages: tuples carry a signature token and are stored
only if the token verifies.

A process never sees the graph. The harness tells it its current
neighbours, hands it what arrived, and asks it what to send.
"""

from __future__ import annotations

import enum
import hashlib
from dataclasses import dataclass
from typing import Any, Hashable, Iterable, NamedTuple

from .errors import ConfigError
from .hitting import exceeds


class Variant(enum.Enum):
    ALG1 = "ALG1"
    ALG2 = "ALG2"
    ALG3 = "ALG3"

    @property
    def authenticated_messages(self) -> bool:
        return self is Variant.ALG3


def content_digest(content: Hashable) -> str:
    return hashlib.sha256(repr(content).encode()).hexdigest()[:16]


@dataclass(frozen=True)
class SignatureToken:
    minted_by: int
    over: str
    nonce: int


class AlTuple(NamedTuple):
    source: int
    content: Any
    traversed: frozenset


class AmTuple(NamedTuple):
    source: int
    content: Any
    token: SignatureToken


def tuple_key(tp) -> tuple:
    """Total order on tuples that does not depend on hash seeds."""
    if isinstance(tp, AlTuple):
        return (tp.source, repr(tp.content), len(tp.traversed), tuple(sorted(tp.traversed)))
    t = tp.token
    return (tp.source, repr(tp.content), t.minted_by, t.over, t.nonce)


class Authority:
    """Idealised signature scheme.

    Tokens are unforgeable because ``verify`` only accepts tokens this
    object minted. Whoever holds a token may replay it; only :meth:`mint`
    creates new ones, and the harness only lets a node mint for itself.
    """

    def __init__(self):
        self._issued: set[SignatureToken] = set()
        self._nonce = 0

    def mint(self, signer: int, content: Hashable) -> SignatureToken:
        self._nonce += 1
        token = SignatureToken(signer, content_digest(content), self._nonce)
        self._issued.add(token)
        return token

    def verify(self, source: int, content: Hashable, token: Any) -> bool:
        return (
            isinstance(token, SignatureToken)
            and token in self._issued
            and token.minted_by == source
            and token.over == content_digest(content)
        )


class Process:
    """State of one correct process. Mutated only by its owner, the harness."""

    def __init__(self, pid: int, variant: Variant, f: int, authority: Authority | None = None):
        if variant.authenticated_messages and authority is None:
            raise ConfigError("ALG3 needs a signature authority")
        self.id = pid
        self.variant = variant
        self.f = f
        self.authority = authority
        self.omega: list = []  # insertion order, so relays can be incremental
        self._stored: set = set()
        self.dirty = False
        self.last_neighbors: frozenset[int] = frozenset()
        self.delivered: set[tuple[int, Any]] = set()
        self.sent: set[Any] = set()
        # AL: minimal stored sets minus the source, per (source, content)
        self._families: dict[tuple[int, Any], list[frozenset]] = {}
        self._pending: set[tuple[int, Any]] = set()

    def _store(self, tp) -> bool:
        if tp in self._stored:
            return False
        self._stored.add(tp)
        self.omega.append(tp)
        self.dirty = True
        return True

    def rc_send(self, content: Any) -> list[tuple[int, Any]]:
        if content in self.sent:
            return []
        self.sent.add(content)
        if self.variant.authenticated_messages:
            self._store(AmTuple(self.id, content, self.authority.mint(self.id, content)))
        else:
            self._store(AlTuple(self.id, content, frozenset()))
        self.delivered.add((self.id, content))
        return [(self.id, content)]

    def compute_phase(self, neighbors: Iterable[int], every_step: bool | None = None) -> bool:
        """Decide whether to multicast ``omega`` this step."""
        neighbors = frozenset(neighbors)
        if every_step is None:
            every_step = self.variant is Variant.ALG2
        emit = every_step or self.dirty or neighbors != self.last_neighbors
        self.dirty = False
        self.last_neighbors = neighbors
        return emit

    def _note_family(self, tp: AlTuple):
        if tp.source not in tp.traversed or tp.source == self.id:
            return
        key = (tp.source, tp.content)
        if key in self.delivered:
            return
        rest = tp.traversed - {tp.source}
        family = self._families.setdefault(key, [])
        if any(k <= rest for k in family):
            return  # a subset is already present: the hitting sets do not change
        family[:] = [k for k in family if not rest <= k]
        family.append(rest)
        self._pending.add(key)

    def on_receive(self, sender: int, payload: Iterable) -> int:
        """Absorb a multicast from ``sender``; returns the number of new tuples."""
        fresh = 0
        if self.variant.authenticated_messages:
            for tp in payload:
                if not isinstance(tp, AmTuple) or not self.authority.verify(tp.source, tp.content, tp.token):
                    continue
                if self._store(tp):
                    fresh += 1
                    if tp.source != self.id and (tp.source, tp.content) not in self.delivered:
                        self._pending.add((tp.source, tp.content))
            return fresh
        for tp in payload:
            traversed = frozenset(tp.traversed) | {sender}
            # a set holding our own id only describes a walk back through us
            if self.id in traversed:
                continue
            stored = AlTuple(tp.source, tp.content, traversed)
            if self._store(stored):
                fresh += 1
                self._note_family(stored)
        return fresh

    def family(self, source: int, content: Any) -> list[frozenset]:
        return list(self._families.get((source, content), ()))

    def check_delivery(self) -> list[tuple[int, Any]]:
        out = []
        for key in sorted(self._pending, key=lambda k: (k[0], repr(k[1]))):
            if key in self.delivered:
                continue
            if self.variant.authenticated_messages or exceeds(self._families[key], self.f):
                self.delivered.add(key)
                out.append(key)
        self._pending.clear()
        return out
