"""Command-line front end.

Exit codes: 0 success (or member), 1 non-member or failed conformance,
2 bad input, unsupported representation, exceeded limits or an oracle
disagreement.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from .classes import ClassQuery, is_member, representative_starts
from .cuts import dyn_min_cut_both, format_cut
from .errors import DynRCError
from .generators import generate
from .graph import EvolvingGraph, PeriodicGraph
from .journeys import Journey
from .sim import (
    ANY,
    AUTO,
    FailureSpec,
    Prediction,
    RcInstance,
    Setting,
    auto_horizon,
    make_fll_schedule,
    make_sc_schedule,
    parse_setting,
    run_trial,
)
from .tegio import load_teg, serialize_teg

CSV_COLUMNS = [
    "graph", "n", "setting", "f", "adversary", "s", "t", "start", "seed",
    "predicted", "delivered_at", "safety_ok", "liveness_ok", "flags",
]


class UsageError(DynRCError):
    pass


def _fmt(value) -> str:
    if value is None:
        return "-"
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return format_cut(value)
    if isinstance(value, Journey):
        hops = zip(value.nodes, value.nodes[1:], value.times)
        return ",".join(f"{u}-{v}@{j}" for u, v, j in hops)
    if isinstance(value, (set, frozenset)):
        items = sorted(value)
        return "{" + ",".join(_fmt(x) for x in items) + "}"
    if isinstance(value, tuple):
        return "(" + ",".join(_fmt(x) for x in value) + ")"
    if isinstance(value, list):
        return "[" + ",".join(_fmt(x) for x in value) + "]"
    if isinstance(value, dict):
        if all(isinstance(k, frozenset) for k in value):
            return _fmt(sorted(value, key=lambda s: (len(s), sorted(s))))
        return ";".join(f"{k}={_fmt(v)}" for k, v in value.items())
    return str(value)


# -- check / mincut / generate -----------------------------------------------------


def cmd_check(args) -> int:
    g = load_teg(args.file)
    q = ClassQuery(args.cls, s=args.s, t=args.t, k=args.k, start=args.start)
    verdict = is_member(g, q, exact=args.exact)
    print(f"member={_fmt(verdict.member)} method={verdict.method.value} witness={_fmt(verdict.witness)}")
    return 0 if verdict.member else 1


def cmd_mincut(args) -> int:
    g = load_teg(args.file)
    report = dyn_min_cut_both(g, args.s, args.t, args.start)
    if report.agree:
        print(f"dynmincut={format_cut(report.value)} oracles=agree")
        return 0
    print(f"dynmincut=? sigma={format_cut(report.sigma)} removal={format_cut(report.removal)} oracles=DISAGREE")
    return 2


def cmd_generate(args) -> int:
    text = serialize_teg(generate(args.spec, args.seed))
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


# -- simulate --------------------------------------------------------------------


def _node_list(text: str | None) -> frozenset[int]:
    if not text:
        return frozenset()
    return frozenset(int(x) for x in text.split(","))


def _target(text: str):
    return ANY if str(text).upper() == ANY else int(text)


def _content(text: str):
    return text.encode()


def _setting_from_flags(args) -> Setting:
    fll = sc = None
    if args.link == "FLL":
        fll = (
            make_fll_schedule("bern", p=args.drop_prob, seed=args.seed)
            if args.drop_prob is not None
            else make_fll_schedule("det", D=args.drops, seed=args.seed)
        )
    if args.compute == "SC":
        sc = make_sc_schedule(args.sc_kind, D=args.blocks, seed=args.seed)
    return Setting(args.link, args.compute, args.auth, fll, sc)


def _horizon_arg(text: str):
    return AUTO if str(text).upper() == AUTO else int(text)


def cmd_simulate(args) -> int:
    g = load_teg(args.file)
    setting = parse_setting(args.setting, args.seed) if args.setting else _setting_from_flags(args)
    failure = FailureSpec(args.f, _node_list(args.byz), args.adversary)
    inst = RcInstance(args.s, _target(args.t), _content(args.content), args.start)
    result = run_trial(g, setting, failure, inst, _horizon_arg(args.horizon), args.seed)
    at = "never" if result.target_delivered_at is None else result.target_delivered_at
    safety = "ok" if result.safety_ok else "VIOLATION"
    print(f"delivered_at={at} safety={safety} predicted={result.predicted}")
    print(f"horizon={result.horizon} variant={result.variant.value} {_fmt(result.horizon_inputs)}")
    if result.assumption_violated:
        print("flags=ASSUMPTION_VIOLATED")
    if args.log:
        result.log.write(args.log)
    return 0


# -- experiment --------------------------------------------------------------------


@dataclass(frozen=True)
class Trial:
    graph_id: str
    graph: EvolvingGraph
    setting: Setting
    failure: FailureSpec
    inst: RcInstance
    seed: int
    horizon: object


def _load_graphs(spec: dict, base: Path) -> list[tuple[str, EvolvingGraph]]:
    out = []
    for i, entry in enumerate(spec.get("graphs", [])):
        gid = entry.get("id", f"g{i}")
        if "file" in entry:
            out.append((gid, load_teg(base / entry["file"])))
        elif "generator" in entry:
            for s in entry.get("seeds", [0]):
                out.append((f"{gid}#{s}", generate(entry["generator"], int(s))))
        else:
            raise UsageError(f"graph entry {gid} needs 'file' or 'generator'")
    if not out:
        raise UsageError("experiment lists no graphs")
    return out


def _starts(g: EvolvingGraph, value) -> list[int]:
    if value == "all":
        if isinstance(g, PeriodicGraph):
            return list(representative_starts(g))
        return list(g.times)
    return [int(value)]


def expand_experiment(spec: dict, base: Path = Path(".")) -> list[Trial]:
    """Every (graph, combination, start, seed) trial, in spec order."""
    combos = spec.get("combinations") or []
    if not combos:
        raise UsageError("experiment has an empty combination list")
    graphs = _load_graphs(spec, base)
    seeds = [int(s) for s in spec.get("seeds", [0])]
    horizon = spec.get("horizon", AUTO)
    if horizon != AUTO and not isinstance(horizon, int):
        raise UsageError(f"horizon must be AUTO or an integer, got {horizon!r}")
    trials = []
    for gid, g in graphs:
        for combo in combos:
            unknown = set(combo) - {"setting", "f", "adversary", "byzantine", "source", "target", "start", "content"}
            if unknown:
                raise UsageError(f"unknown combination keys {sorted(unknown)}")
            failure = FailureSpec(int(combo.get("f", 0)), frozenset(combo.get("byzantine", [])), combo.get("adversary", "SILENT"))
            for start in _starts(g, combo.get("start", 0)):
                inst = RcInstance(
                    int(combo.get("source", 0)),
                    _target(combo.get("target", ANY)),
                    _content(combo.get("content", "m")),
                    start,
                )
                for seed in seeds:
                    setting = parse_setting(combo.get("setting", "PL/NC/AL"), seed)
                    trials.append(Trial(gid, g, setting, failure, inst, seed, horizon))
    return trials


def _run(trial: Trial) -> dict:
    r = run_trial(trial.graph, trial.setting, trial.failure, trial.inst, trial.horizon, trial.seed)
    return {
        "graph": trial.graph_id,
        "n": trial.graph.n,
        "setting": trial.setting.label,
        "f": trial.failure.f,
        "adversary": trial.failure.label,
        "s": trial.inst.source,
        "t": trial.inst.target,
        "start": trial.inst.start,
        "seed": trial.seed,
        "predicted": str(r.predicted),
        "delivered_at": "never" if r.target_delivered_at is None else r.target_delivered_at,
        "safety_ok": _fmt(r.safety_ok),
        "liveness_ok": _fmt(r.liveness_ok),
        "flags": "ASSUMPTION_VIOLATED" if r.assumption_violated else "",
    }


def conformance_violation(row: dict) -> bool:
    if row["flags"]:
        return False
    return row["safety_ok"] != "true" or (row["predicted"] == str(Prediction.SOLVABLE) and row["liveness_ok"] != "true")


def cmd_experiment(args) -> int:
    path = Path(args.spec)
    try:
        spec = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: {exc}") from None
    trials = expand_experiment(spec, path.parent)
    audited = set()
    for t in trials:
        if t.horizon == AUTO:
            key = (t.graph_id, t.setting.label, t.inst.start)
            if key not in audited:
                audited.add(key)
                value, inputs = auto_horizon(t.graph, t.setting, t.inst.start)
                print(f"auto-horizon graph={t.graph_id} setting={t.setting.label} start={t.inst.start} "
                      f"value={value} {_fmt(inputs)}")
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(_run, trials, chunksize=4))
    else:
        rows = [_run(t) for t in trials]

    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    if args.out:
        Path(args.out).write_text(buf.getvalue(), encoding="utf-8")
    else:
        sys.stdout.write(buf.getvalue())

    flagged = sum(1 for r in rows if r["flags"])
    violations = sum(1 for r in rows if conformance_violation(r))
    print(f"trials={len(rows)} checked={len(rows) - flagged} assumption_violated={flagged} violations={violations}")
    return 1 if violations else 0


# -- parser --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dynrc", description="Reliable communication over evolving graphs.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="decide class membership of a .teg graph")
    c.add_argument("file")
    c.add_argument("cls", metavar="CLASS")
    c.add_argument("--k", type=int)
    c.add_argument("--s", type=int)
    c.add_argument("--t", type=int)
    c.add_argument("--from", dest="start", type=int)
    c.add_argument("--exact", action="store_true", help="use the exponential decision procedure")
    c.set_defaults(func=cmd_check)

    m = sub.add_parser("mincut", help="dynamic min-cut with both oracles")
    m.add_argument("file")
    m.add_argument("s", type=int)
    m.add_argument("t", type=int)
    m.add_argument("--from", dest="start", type=int)
    m.set_defaults(func=cmd_mincut)

    s = sub.add_parser("simulate", help="run one reliable-communication trial")
    s.add_argument("file")
    s.add_argument("--setting", help="LINK/COMPUTE/AUTH label, e.g. FLL:det=1/SC:blocks=2/AL")
    s.add_argument("--link", choices=["PL", "FLL"], default="PL")
    s.add_argument("--compute", choices=["NC", "SC"], default="NC")
    s.add_argument("--auth", choices=["AL", "AM"], default="AL")
    s.add_argument("--drops", type=int, default=0, help="deterministic fair-loss bound D")
    s.add_argument("--drop-prob", type=float, help="Bernoulli fair-loss drop probability")
    s.add_argument("--blocks", type=int, default=0, help="bound D on blocked compute runs")
    s.add_argument("--sc-kind", choices=["blocks", "seeded"], default="blocks")
    s.add_argument("--f", type=int, default=0)
    s.add_argument("--byz", help="comma-separated Byzantine node ids")
    s.add_argument("--adversary", default="SILENT")
    s.add_argument("--s", type=int, required=True)
    s.add_argument("--t", default=ANY, help="target node id or ANY")
    s.add_argument("--from", dest="start", type=int, default=0)
    s.add_argument("--content", default="m")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--horizon", default=AUTO)
    s.add_argument("--log", help="write the event log to this file")
    s.set_defaults(func=cmd_simulate)

    gen = sub.add_parser("generate", help="write a generated graph as .teg")
    gen.add_argument("spec")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("-o", "--out")
    gen.set_defaults(func=cmd_generate)

    e = sub.add_parser("experiment", help="run a JSON experiment spec, write CSV")
    e.add_argument("spec")
    e.add_argument("--out")
    e.add_argument("--jobs", type=int, default=1)
    e.set_defaults(func=cmd_experiment)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (DynRCError, ValueError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
