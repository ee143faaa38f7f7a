"""Discrete-time simulation of reliable communication over an evolving graph.

Every step ``j`` runs three phases for all processes, in node order:

1. COMPUTE: buffered tuples are absorbed, the source issues ``rc_send``,
   correct processes decide whether to multicast and Byzantine nodes act;
2. SEND: multicasts travel over the edges present at ``j``;
3. RECEIVE: surviving tuples are absorbed and delivery rules run.

Because delivery and relaying are decided before the next COMPUTE, a tuple
crosses at most one edge per step.

Multicasts always carry the full tuple set. The harness only hands the
receiver tuples that a link has not yet carried successfully, which is
equivalent because re-receiving a stored tuple changes nothing.
"""

from __future__ import annotations

import copy
import enum
import math
import random
import re
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Any, NamedTuple

from .adversary import AdversaryContext, ByzantineNode, Silent, Strategy, make_strategy
from .connectivity import local_connectivity
from .cuts import dyn_min_cut
from .errors import ConfigError, InvalidParam
from .graph import EvolvingGraph, PeriodicGraph
from .journeys import effective_horizon
from .protocol import Authority, Process, Variant

ANY = "ANY"
AUTO = "AUTO"

# How much longer than one (D_c+1)-period the wait for a free step on a
# given edge residue may be under the aperiodic block pattern. Measured
# worst case is below 6 for D_c <= 2 and periods up to 16.
SC_SPREAD = 6
BERNOULLI_TAIL = 1e-6


class Prediction(enum.Enum):
    SOLVABLE = "solvable"
    UNSOLVABLE = "unsolvable"

    def __str__(self):
        return self.value


# -- schedules ---------------------------------------------------------------


@dataclass(frozen=True)
class FllSchedule:
    """Fair-loss drops, decided per (directed link, tuple) transmission attempt."""

    kind: str
    D: int = 0
    p: float = 0.0
    seed: int = 0

    @property
    def bound(self) -> int:
        """Consecutive drops to plan for on one (link, tuple) pair."""
        if self.kind == "det":
            return self.D
        if self.p == 0:
            return 0
        return max(0, math.ceil(math.log(BERNOULLI_TAIL) / math.log(self.p)) - 1)

    @property
    def label(self) -> str:
        return f"det={self.D}" if self.kind == "det" else f"bern={self.p}"

    def fresh(self, trial_seed: int) -> "_Drops":
        return _Drops(self, random.Random(f"fll:{self.seed}:{trial_seed}"))


class _Drops:
    def __init__(self, schedule: FllSchedule, rng: random.Random):
        self.schedule = schedule
        self.rng = rng
        self.attempts: dict[tuple, int] = defaultdict(int)

    def delivers(self, u: int, v: int, tp) -> bool:
        if self.schedule.kind == "det":
            key = (u, v, tp)
            self.attempts[key] += 1
            return self.attempts[key] > self.schedule.D
        return self.rng.random() >= self.schedule.p


def make_fll_schedule(kind: str, D: int = 0, p: float = 0.0, seed: int = 0) -> FllSchedule:
    kind = {"deterministic": "det", "bernoulli": "bern"}.get(kind, kind)
    if kind == "det":
        if not isinstance(D, int) or D < 0:
            raise InvalidParam(f"drop bound must be a natural number, got {D!r}")
        return FllSchedule("det", D=D, seed=seed)
    if kind == "bern":
        if not 0.0 <= p < 1.0:
            raise InvalidParam(f"fair-loss needs 0 <= p < 1, got {p}")
        return FllSchedule("bern", p=p, seed=seed)
    raise InvalidParam(f"unknown fair-loss schedule {kind!r}")


@dataclass(frozen=True)
class ScSchedule:
    """Steps at which a process cannot compute or send.

    ``blocks``: free steps of node ``i`` are ``floor(m*a) + phase_i`` with
    ``a = D + 1/sqrt(2)``. Gaps between free steps are D or D+1, so no
    blocked run exceeds D, and the pattern is aperiodic so it cannot lock
    onto the period of the graph. ``seeded``: blocked runs of random length
    in ``[0, D]``. ``intervals``: explicit inclusive blocked intervals.
    """

    kind: str
    D: int = 0
    seed: int = 0
    intervals: tuple = ()
    _runs: dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    @property
    def bound(self) -> int:
        if self.kind == "intervals":
            return max((b - a + 1 for _, spans in self.intervals for a, b in spans), default=0)
        return self.D

    @property
    def label(self) -> str:
        if self.kind == "intervals":
            return "intervals=" + ";".join(f"{v}:{a}-{b}" for v, spans in self.intervals for a, b in spans)
        return f"{self.kind}={self.D}"

    def blocked(self, node: int, step: int) -> bool:
        if self.kind == "intervals":
            return any(a <= step <= b for v, spans in self.intervals if v == node for a, b in spans)
        if self.D == 0:
            return False
        if self.kind == "blocks":
            a = self.D + 1 / math.sqrt(2)
            x = step - (node * 7 + self.seed) % (self.D + 2)
            return not math.ceil(x / a) * a < x + 1
        return self._seeded(node, step)

    def _seeded(self, node: int, step: int) -> bool:
        if step < 0:
            return False
        flags = self._runs.get(node)
        if flags is None:
            flags = self._runs[node] = ([], random.Random(f"sc:{self.seed}:{node}"))
        out, rng = flags
        while len(out) <= step:
            out.extend([True] * rng.randint(0, self.D) + [False])
        return out[step]


def make_sc_schedule(kind: str, D: int = 0, seed: int = 0, intervals: dict | None = None) -> ScSchedule:
    if kind == "intervals":
        spans = []
        for v, items in sorted((intervals or {}).items()):
            items = tuple(sorted((int(a), int(b)) for a, b in items))
            if any(a > b for a, b in items):
                raise InvalidParam(f"empty blocked interval for node {v}")
            spans.append((int(v), items))
        return ScSchedule("intervals", intervals=tuple(spans))
    if kind not in ("blocks", "seeded"):
        raise InvalidParam(f"unknown compute schedule {kind!r}")
    if not isinstance(D, int) or D < 0:
        raise InvalidParam(f"blocked runs must have a finite bound, got {D!r}")
    return ScSchedule(kind, D=D, seed=seed)


# -- settings and trial descriptions ----------------------------------------


@dataclass(frozen=True)
class Setting:
    link: str = "PL"
    compute: str = "NC"
    auth: str = "AL"
    fll: FllSchedule | None = None
    sc: ScSchedule | None = None

    def __post_init__(self):
        if self.link not in ("PL", "FLL") or self.compute not in ("NC", "SC") or self.auth not in ("AL", "AM"):
            raise ConfigError(f"bad setting {self.link}/{self.compute}/{self.auth}")
        if self.link == "FLL" and self.fll is None:
            object.__setattr__(self, "fll", make_fll_schedule("det", 0))
        if self.compute == "SC" and self.sc is None:
            object.__setattr__(self, "sc", make_sc_schedule("blocks", 0))
        if self.link == "PL":
            object.__setattr__(self, "fll", None)
        if self.compute == "NC":
            object.__setattr__(self, "sc", None)

    @property
    def synchronous(self) -> bool:
        return self.link == "PL" and self.compute == "NC"

    @property
    def variant(self) -> Variant:
        if self.auth == "AM":
            return Variant.ALG3
        return Variant.ALG1 if self.synchronous else Variant.ALG2

    @property
    def every_step(self) -> bool:
        return not self.synchronous

    @property
    def label(self) -> str:
        link = f"FLL:{self.fll.label}" if self.fll else "PL"
        comp = f"SC:{self.sc.label}" if self.sc else "NC"
        return f"{link}/{comp}/{self.auth}"


def parse_setting(text: str, seed: int = 0) -> Setting:
    """Inverse of :attr:`Setting.label`, e.g. ``FLL:det=1/SC:blocks=2/AL``."""
    parts = text.strip().split("/")
    if len(parts) != 3:
        raise ConfigError(f"setting must look like LINK/COMPUTE/AUTH, got {text!r}")
    link, comp, auth = parts
    try:
        fll = sc = None
        if link.startswith("FLL"):
            kind, _, value = link[4:].partition("=") if ":" in link else ("det", "", "0")
            fll = make_fll_schedule(kind, D=int(value), seed=seed) if kind == "det" else make_fll_schedule(
                kind, p=float(value), seed=seed
            )
            link = "FLL"
        if comp.startswith("SC"):
            kind, _, value = comp[3:].partition("=") if ":" in comp else ("blocks", "", "0")
            sc = make_sc_schedule(kind, D=int(value), seed=seed)
            comp = "SC"
    except ValueError as exc:
        raise ConfigError(f"bad setting {text!r}: {exc}") from None
    return Setting(link, comp, auth, fll, sc)


@dataclass(frozen=True)
class FailureSpec:
    f: int = 0
    byzantine: frozenset = frozenset()
    strategy: Any = "SILENT"

    def __post_init__(self):
        object.__setattr__(self, "byzantine", frozenset(self.byzantine))
        if self.f < 0:
            raise ConfigError("f must be a natural number")

    @property
    def assumption_violated(self) -> bool:
        return len(self.byzantine) > self.f

    def make_strategy(self) -> Strategy:
        if isinstance(self.strategy, Strategy):
            return copy.deepcopy(self.strategy)
        return make_strategy(self.strategy or "SILENT")

    @property
    def label(self) -> str:
        if not self.byzantine:
            return "none"
        name = self.strategy if isinstance(self.strategy, str) else self.strategy.name
        return f"{name.upper()}{{{','.join(map(str, sorted(self.byzantine)))}}}"


@dataclass(frozen=True)
class RcInstance:
    source: int
    target: Any = ANY
    content: Any = b"m"
    start: int = 0


# -- event log -----------------------------------------------------------------


class EventRecord(NamedTuple):
    step: int
    phase: str
    actor: int
    detail: str

    def line(self) -> str:
        return f"{self.step} {self.phase} {self.actor} {self.detail}"


@dataclass
class EventLog:
    """Append-only, totally ordered trace: one ``step phase actor detail`` line per record."""

    n: int
    horizon: int
    records: list[EventRecord] = field(default_factory=list)

    def add(self, step: int, phase: str, actor: int, detail: str):
        self.records.append(EventRecord(step, phase, actor, detail))

    def lines(self) -> list[str]:
        return [r.line() for r in self.records]

    def text(self) -> str:
        return "".join(line + "\n" for line in self.lines())

    def write(self, path):
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.text())


_SEND_RE = re.compile(r"rc_send c=(.*)")
_DELIVER_RE = re.compile(r"s=(\d+) c=(.*)")


@dataclass
class TrialResult:
    delivered_at: dict
    target_delivered_at: int | None
    safety_ok: bool
    liveness_ok: bool
    predicted: Prediction | None
    horizon: int
    log: EventLog
    variant: Variant
    assumption_violated: bool
    horizon_inputs: dict


# -- prediction and evaluation ---------------------------------------------------


def _targets(g: EvolvingGraph, inst: RcInstance) -> list[int]:
    return [v for v in range(g.n) if v != inst.source] if inst.target == ANY else [inst.target]


def predict_solvability(g: EvolvingGraph, setting: Setting, f: int, inst: RcInstance) -> Prediction:
    """Sufficient conditions: the cut must exceed ``2f`` with AL and ``f`` with AM.

    With perfect links and instant computation the cut is the dynamic one
    from ``inst.start``. Otherwise it is the recurrent one, which needs an
    infinite lifetime.
    """
    threshold = 2 * f if setting.auth == "AL" else f
    if not setting.synchronous and not isinstance(g, PeriodicGraph):
        return Prediction.UNSOLVABLE
    for t in _targets(g, inst):
        if setting.synchronous:
            cut = dyn_min_cut(g, inst.source, t, inst.start)
        else:
            cut = local_connectivity(g.n, g.recurrent_edges(), inst.source, t)
        if not cut > threshold:
            return Prediction.UNSOLVABLE
    return Prediction.SOLVABLE


def evaluate(log: EventLog, failure: FailureSpec, inst: RcInstance) -> tuple[bool, bool]:
    """Safety and liveness, read from the event log alone."""
    sent: dict[tuple[int, str], int] = {}
    for r in log.records:
        if r.phase == "COMPUTE":
            m = _SEND_RE.fullmatch(r.detail)
            if m:
                sent.setdefault((r.actor, m.group(1)), r.step)
    safety = True
    got: dict[int, int] = {}
    want = repr(inst.content)
    for r in log.records:
        if r.phase != "DELIVER" or r.actor in failure.byzantine:
            continue
        m = _DELIVER_RE.fullmatch(r.detail)
        s, c = int(m.group(1)), m.group(2)
        if s not in failure.byzantine and sent.get((s, c), math.inf) > r.step:
            safety = False
        if s == inst.source and c == want and r.step <= log.horizon:
            got.setdefault(r.actor, r.step)
    if inst.target == ANY:
        targets = [v for v in range(log.n) if v not in failure.byzantine]
    else:
        targets = [inst.target]
    return safety, all(v in got for v in targets)


# -- horizon -------------------------------------------------------------------


def auto_horizon(g: EvolvingGraph, setting: Setting, start: int) -> tuple[int, dict]:
    """Smallest horizon a trial may use, with the inputs that produced it."""
    base = effective_horizon(g, start)
    if setting.synchronous:
        return base, {"effective_horizon": base, "slack": 0}
    period = g.period if isinstance(g, PeriodicGraph) else 1
    d_link = setting.fll.bound if setting.fll else 0
    d_comp = setting.sc.bound if setting.sc else 0
    spread = 1 if d_comp == 0 else SC_SPREAD
    slack = (g.n - 1) * (d_link + 1) * (d_comp + 1) * period * spread
    inputs = {
        "effective_horizon": base, "n": g.n, "D_link": d_link, "D_compute": d_comp,
        "period": period, "sc_spread": spread, "slack": slack,
    }
    return base + slack, inputs


# -- the trial -----------------------------------------------------------------


def _neighbors(n: int, edges) -> list[frozenset[int]]:
    adj: list[set[int]] = [set() for _ in range(n)]
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    return [frozenset(a) for a in adj]


def _check_config(g: EvolvingGraph, failure: FailureSpec, inst: RcInstance):
    ids = range(g.n)
    if inst.source not in ids or (inst.target != ANY and inst.target not in ids):
        raise ConfigError(f"source/target must be node ids in [0, {g.n})")
    if inst.target == inst.source:
        raise ConfigError("source and target must differ")
    if any(b not in ids for b in failure.byzantine):
        raise ConfigError("Byzantine ids must be node ids")
    if inst.source in failure.byzantine:
        raise ConfigError("the source must be correct")
    if inst.target != ANY and inst.target in failure.byzantine:
        raise ConfigError("the target must be correct")


def run_trial(
    g: EvolvingGraph,
    setting: Setting,
    failure: FailureSpec,
    inst: RcInstance,
    horizon: int | str | None = AUTO,
    seed: int = 0,
    predict: bool = True,
) -> TrialResult:
    _check_config(g, failure, inst)
    floor, inputs = auto_horizon(g, setting, inst.start)
    if horizon in (None, AUTO):
        horizon = floor
    elif horizon < inst.start:
        raise ConfigError(f"horizon {horizon} is before the start {inst.start}")
    elif not setting.synchronous and horizon < floor:
        raise ConfigError(f"horizon {horizon} is below the required {floor} ({inputs})")

    n = g.n
    am = setting.auth == "AM"
    variant = setting.variant
    every_step = setting.every_step
    authority = Authority()
    byz = sorted(failure.byzantine)
    procs = {v: Process(v, variant, failure.f, authority) for v in range(n) if v not in failure.byzantine}
    bnodes = {b: ByzantineNode(b) for b in byz}

    def sign(node: int, content):
        if node not in bnodes:
            raise ConfigError("an adversary may only sign as a Byzantine node")
        return authority.mint(node, content)

    strategy = failure.make_strategy() if byz else Silent()
    strategy.bind(AdversaryContext(n, tuple(byz), failure.f, am, inst.source, inst.content, sign))
    drops = setting.fll.fresh(seed) if setting.fll else None
    sc = setting.sc

    log = EventLog(n, horizon)
    delivered_at: dict = {}
    carried: dict[tuple[int, int], int] = {}
    pending: dict[tuple[int, int], list] = defaultdict(list)
    buffers: dict[int, list] = defaultdict(list)
    sent = False

    def deliver(v: int, j: int, events):
        for s, c in events:
            delivered_at[(v, s, c)] = j
            log.add(j, "DELIVER", v, f"s={s} c={c!r}")

    def transmit(u: int, v: int, tuples: list) -> tuple[list, list]:
        if drops is None:
            return tuples, []
        passed, dropped = [], []
        for tp in tuples:
            (passed if drops.delivers(u, v, tp) else dropped).append(tp)
        return passed, dropped

    for j in range(horizon + 1):
        nbrs = _neighbors(n, g.edges_at(j))
        blocked = {v for v in procs if sc is not None and sc.blocked(v, j)}

        # COMPUTE
        outgoing: dict[int, dict[int, list] | None] = {}
        for v in range(n):
            if v in bnodes:
                plan = strategy.act(bnodes[v], j, nbrs[v])
                plan = {w: list(p) for w, p in plan.items() if w in nbrs[v] and p}
                if plan:
                    outgoing[v] = plan
                log.add(j, "COMPUTE", v, f"byzantine {strategy.name} links={len(plan)}")
                continue
            p = procs[v]
            if v in blocked:
                log.add(j, "COMPUTE", v, "blocked")
                continue
            if buffers[v]:
                for u, payload in buffers.pop(v):
                    p.on_receive(u, payload)
                deliver(v, j, p.check_delivery())
            if v == inst.source and not sent and j >= inst.start:
                sent = True
                log.add(j, "COMPUTE", v, f"rc_send c={inst.content!r}")
                deliver(v, j, p.rc_send(inst.content))
            if p.compute_phase(nbrs[v], every_step):
                outgoing[v] = None
                log.add(j, "COMPUTE", v, f"multicast omega={len(p.omega)}")

        # SEND
        inbox: dict[int, list] = defaultdict(list)
        for u in sorted(outgoing):
            plan = outgoing[u]
            for v in sorted(nbrs[u] if plan is None else plan):
                if plan is None:
                    key = (u, v)
                    omega = procs[u].omega
                    queue = pending[key]
                    queue.extend(omega[carried.get(key, 0):])
                    carried[key] = len(omega)
                    passed, dropped = transmit(u, v, queue)
                    pending[key] = dropped  # retried with the next multicast
                else:
                    passed, dropped = transmit(u, v, plan[v])
                if passed:
                    log.add(j, "SEND", u, f"to={v} tuples={len(passed)}")
                    inbox[v].append((u, passed))
                if dropped:
                    log.add(j, "DROP", u, f"to={v} tuples={len(dropped)}")

        # RECEIVE
        for v in sorted(inbox):
            for u, payload in inbox[v]:
                if v in bnodes:
                    bnodes[v].observe(u, payload, am)
                    log.add(j, "RECEIVE", v, f"from={u} tuples={len(payload)}")
                elif v in blocked:
                    buffers[v].append((u, payload))
                    log.add(j, "RECEIVE", v, f"from={u} buffered={len(payload)}")
                else:
                    fresh = procs[v].on_receive(u, payload)
                    log.add(j, "RECEIVE", v, f"from={u} new={fresh}")
            if v in procs and v not in blocked:
                deliver(v, j, procs[v].check_delivery())

    safety, liveness = evaluate(log, failure, inst)
    if inst.target == ANY:
        times = [delivered_at.get((v, inst.source, inst.content)) for v in procs]
        target_at = None if any(t is None for t in times) else max(times)
    else:
        target_at = delivered_at.get((inst.target, inst.source, inst.content))
    predicted = predict_solvability(g, setting, failure.f, inst) if predict else None
    return TrialResult(
        delivered_at, target_at, safety, liveness, predicted, horizon, log, variant,
        failure.assumption_violated, inputs,
    )
