import random
from itertools import permutations

import pytest

from dynrc.errors import ConfigError, InvalidParam
from dynrc.generators import generate
from dynrc.graph import periodic_graph
from dynrc.journeys import effective_horizon
from dynrc.protocol import AlTuple
from dynrc.sim import (
    ANY,
    FailureSpec,
    Prediction,
    RcInstance,
    Setting,
    auto_horizon,
    evaluate,
    make_fll_schedule,
    make_sc_schedule,
    parse_setting,
    predict_solvability,
    run_trial,
)

INST = RcInstance(0, 3, b"m", 1)


def test_fault_free_f0_delivers_at_2(fig1_periodic):
    r = run_trial(fig1_periodic, Setting(), FailureSpec(0), INST)
    assert r.target_delivered_at == 2
    assert (r.safety_ok, r.liveness_ok) == (True, True)


def test_fault_free_f1_delivers_at_3(fig1_periodic):
    r = run_trial(fig1_periodic, Setting(), FailureSpec(1), INST)
    assert r.target_delivered_at == 3
    assert evaluate(r.log, FailureSpec(1), INST) == (True, True)


def test_silent_p2_blocks_delivery(fig1_periodic):
    failure = FailureSpec(1, {1}, "SILENT")
    r = run_trial(fig1_periodic, Setting(), failure, INST)
    assert r.target_delivered_at is None
    assert r.predicted is Prediction.UNSOLVABLE
    assert evaluate(r.log, failure, INST) == (True, False)


def test_am_tolerates_silent_p2(fig1_periodic):
    r = run_trial(fig1_periodic, Setting(auth="AM"), FailureSpec(1, {1}, "SILENT"), INST)
    assert r.target_delivered_at == 3 and r.predicted is Prediction.SOLVABLE


def test_predictions_on_finite_fig1(fig1):
    assert predict_solvability(fig1, Setting(), 0, INST) is Prediction.SOLVABLE
    assert predict_solvability(fig1, Setting(), 1, INST) is Prediction.UNSOLVABLE
    assert predict_solvability(fig1, Setting(auth="AM"), 1, INST) is Prediction.SOLVABLE
    assert predict_solvability(fig1, parse_setting("FLL:det=0/NC/AL"), 0, INST) is Prediction.UNSOLVABLE


def test_colluders_never_cause_forged_delivery(fig1_periodic):
    for name in ("FORGE", "COLLUDE", "REPLAY-DROP"):
        for setting in (Setting(), Setting(auth="AM")):
            failure = FailureSpec(1, {2}, name)
            r = run_trial(fig1_periodic, setting, failure, RcInstance(0, 3, b"m", 1))
            assert r.safety_ok
            assert not any(c != b"m" for (_, s, c) in r.delivered_at if s == 0)


def test_deterministic_zero_drops_equals_perfect_links(fig1_periodic):
    a = run_trial(fig1_periodic, Setting(compute="SC"), FailureSpec(0), INST)
    b = run_trial(fig1_periodic, Setting("FLL", "SC", fll=make_fll_schedule("det", 0)), FailureSpec(0), INST)
    assert a.log.lines() == b.log.lines()


def test_deterministic_drops_delay_by_attempts():
    g = periodic_graph(2, [], [[(0, 1)]])
    inst = RcInstance(0, 1, b"m", 0)
    r = run_trial(g, Setting("FLL", fll=make_fll_schedule("det", 2)), FailureSpec(0), inst)
    assert r.target_delivered_at == 2
    assert [rec.step for rec in r.log.records if rec.phase == "DROP" and rec.actor == 0] == [0, 1]


def test_bernoulli_reproducible_and_fair():
    with pytest.raises(InvalidParam):
        make_fll_schedule("bernoulli", p=1.0)
    g = generate("recurrent-core(n=6,k=3,period=3,noise=0)", 1)
    setting = Setting("FLL", fll=make_fll_schedule("bernoulli", p=0.5, seed=4))
    inst = RcInstance(0, ANY, b"m", 0)
    a = run_trial(g, setting, FailureSpec(1, {3}, "FORGE"), inst, seed=9)
    b = run_trial(g, setting, FailureSpec(1, {3}, "FORGE"), inst, seed=9)
    assert a.log.lines() == b.log.lines() and a.liveness_ok


def test_sc_zero_blocks_equals_nc(fig1_periodic):
    nc = run_trial(fig1_periodic, Setting(link="FLL"), FailureSpec(0), INST)
    sc = run_trial(fig1_periodic, Setting("FLL", "SC", sc=make_sc_schedule("blocks", 0)), FailureSpec(0), INST)
    assert nc.log.lines() == sc.log.lines()


def test_blocked_source_sends_late():
    g = periodic_graph(3, [], [[(0, 1), (1, 2)]])
    sc = make_sc_schedule("intervals", intervals={0: [(2, 4)]})
    r = run_trial(g, Setting(compute="SC", sc=sc), FailureSpec(0), RcInstance(0, 2, b"m", 2))
    sends = [rec.step for rec in r.log.records if rec.detail.startswith("rc_send")]
    assert sends == [5]
    assert min(rec.step for rec in r.log.records if rec.phase == "SEND") == 5


def test_blocked_receiver_buffers():
    g = periodic_graph(2, [], [[(0, 1)]])
    sc = make_sc_schedule("intervals", intervals={1: [(0, 3)]})
    r = run_trial(g, Setting(compute="SC", sc=sc), FailureSpec(0), RcInstance(0, 1, b"m", 0))
    assert any(rec.phase == "RECEIVE" and "buffered" in rec.detail for rec in r.log.records)
    assert r.target_delivered_at == 4


@pytest.mark.parametrize("kind", ["blocks", "seeded"])
@pytest.mark.parametrize("D", [1, 2, 3, 5])
def test_block_runs_are_bounded(kind, D):
    sc = make_sc_schedule(kind, D, seed=3)
    for node in range(6):
        run = longest = 0
        for j in range(2000):
            run = run + 1 if sc.blocked(node, j) else 0
            longest = max(longest, run)
        assert 0 < longest <= D


def test_invalid_schedules():
    with pytest.raises(InvalidParam):
        make_sc_schedule("blocks", -1)
    with pytest.raises(InvalidParam):
        make_sc_schedule("blocks", float("inf"))
    with pytest.raises(InvalidParam):
        make_fll_schedule("det", -2)


def test_config_errors(fig1_periodic):
    with pytest.raises(ConfigError):
        run_trial(fig1_periodic, Setting(), FailureSpec(1, {0}), INST)
    with pytest.raises(ConfigError):
        run_trial(fig1_periodic, Setting(), FailureSpec(1, {3}), INST)
    with pytest.raises(ConfigError):
        run_trial(fig1_periodic, Setting(), FailureSpec(0), INST, horizon=0)
    with pytest.raises(ConfigError):
        run_trial(fig1_periodic, parse_setting("FLL:det=1/NC/AL"), FailureSpec(0), INST, horizon=20)


def test_auto_horizon_inputs(fig1_periodic):
    value, inputs = auto_horizon(fig1_periodic, parse_setting("FLL:det=1/SC:blocks=2/AL"), 1)
    assert inputs["effective_horizon"] == effective_horizon(fig1_periodic, 1)
    assert value == inputs["effective_horizon"] + 3 * 2 * 3 * 3 * inputs["sc_spread"]
    assert auto_horizon(fig1_periodic, Setting(), 1)[0] == effective_horizon(fig1_periodic, 1)


def test_setting_labels_round_trip():
    for text in ("PL/NC/AL", "FLL:det=3/SC:blocks=2/AM", "FLL:bern=0.25/NC/AL", "PL/SC:seeded=1/AL"):
        assert parse_setting(text).label == text
    assert parse_setting("PL/NC/AL").variant.value == "ALG1"
    assert parse_setting("FLL:det=1/NC/AL").variant.value == "ALG2"
    assert parse_setting("PL/SC:blocks=1/AM").variant.value == "ALG3"
    with pytest.raises(ConfigError):
        parse_setting("PL/NC")


def test_assumption_violation_is_flagged():
    g = generate("recurrent-core(n=8,k=5,period=3,noise=0.3)", 0)
    r = run_trial(g, Setting(), FailureSpec(1, {5, 6, 7}, "FORGE"), RcInstance(0, ANY, b"m", 0))
    assert r.assumption_violated
    assert not r.safety_ok  # three forgers exceed the bound of one


def test_log_is_replayable():
    g = generate("periodic-er(n=6,period=3,p=0.5)", 2)
    setting = parse_setting("FLL:bern=0.3/SC:seeded=2/AL", seed=5)
    args = (g, setting, FailureSpec(1, {4}, "COLLUDE"), RcInstance(0, ANY, b"m", 1))
    assert run_trial(*args, seed=3).log.text() == run_trial(*args, seed=3).log.text()


def _journey_with(g, s, i, inter, start, until):
    for order in permutations(sorted(inter)):
        at, ok = start - 1, True
        for u, v in zip((s,) + order, order + (i,)):
            at = next((j for j in range(at + 1, until + 1) if (min(u, v), max(u, v)) in g.edges_at(j)), None)
            if at is None:
                ok = False
                break
        if ok:
            return True
    return False


def test_stored_tuples_correspond_to_journeys():
    # replay the trial step by step through the public API to inspect Ω
    from dynrc import sim

    rng = random.Random(8)
    for _ in range(6):
        g = generate("periodic-er(n=5,period=3,p=0.45)", rng.randrange(1000))
        captured = {}
        original = sim.Process

        class Spy(original):
            def __init__(self, *a, **k):
                super().__init__(*a, **k)
                captured[self.id] = self

        sim.Process = Spy
        try:
            r = run_trial(g, Setting(), FailureSpec(0), RcInstance(0, ANY, b"m", 1))
        finally:
            sim.Process = original
        for i, p in captured.items():
            for tp in p.omega:
                assert isinstance(tp, AlTuple)
                if i == 0:
                    continue
                assert _journey_with(g, 0, i, tp.traversed - {0}, 1, r.horizon)


def test_fll_redundancy_bound():
    for seed in range(4):
        g = generate("recurrent-core(n=6,k=3,period=3,noise=0)", seed)
        for D in (1, 2):
            r = run_trial(g, Setting("FLL", fll=make_fll_schedule("det", D)), FailureSpec(1, {5}, "SILENT"), RcInstance(0, 4, b"m", 0))
            assert r.liveness_ok
            assert r.target_delivered_at <= (g.n - 1) * (D + 1) * g.period * 2


def test_authenticated_messages_under_fair_loss_and_slow_compute():
    # k = 2 recurrent connectivity is enough for f = 1 with signatures, not without
    g = generate("recurrent-core(n=6,k=2,period=3,noise=0)", 5)
    inst = RcInstance(0, ANY, b"m", 1)
    am = parse_setting("FLL:det=1/SC:blocks=2/AM")
    al = parse_setting("FLL:det=1/SC:blocks=2/AL")
    assert predict_solvability(g, am, 1, inst) is Prediction.SOLVABLE
    assert predict_solvability(g, al, 1, inst) is Prediction.UNSOLVABLE
    for adversary in ("SILENT", "FORGE", "COLLUDE", "REPLAY-DROP"):
        r = run_trial(g, am, FailureSpec(1, {3}, adversary), inst)
        assert r.variant.value == "ALG3" and r.liveness_ok and r.safety_ok
