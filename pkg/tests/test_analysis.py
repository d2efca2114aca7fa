"""Potential-function verification: point queries, condition walks, charges.

Hand-derived values for the three-job running example (fast side at speed
3/2, reference = unit-speed shortest-remaining) are frozen here; each was
computed by replaying the schedules by hand before the module existed.
"""

import pytest

from srptlab import (
    AnalysisError,
    ExecutionTrace,
    Segment,
    SpeedConfig,
    UNIT_SPEED,
    alg_backlog,
    brute_force_opt,
    check_backlog_bound,
    check_completion_charge,
    check_flow_conditions,
    check_power_flow_conditions,
    fifo_priority,
    flow_potential,
    make_context,
    make_instance,
    objectives,
    power_flow_potential,
    ref_backlog_smaller,
    remaining_at,
    report_to_json,
    simulate_policy,
    simulate_srpt,
)
from srptlab.analysis import _mk_report, _rec_le
from srptlab.core import events_of
from srptlab.rationals import rat

from helpers import random_integer_instance


@pytest.fixture(scope="module")
def e1_ctx(e1_instance, e1_fast_trace, e1_unit_trace):
    return make_context(e1_fast_trace, e1_unit_trace)


@pytest.fixture(scope="module")
def e1_unit_ctx(e1_instance, e1_unit_trace):
    # both sides at unit speed: eps = 0, only the backlog queries make sense
    return make_context(e1_unit_trace, e1_unit_trace)


def single_job_ctx(p="1", eps="1/2", machines=1):
    inst = make_instance([(0, 0, rat(p))], machines=machines)
    fast = simulate_srpt(inst, SpeedConfig.from_epsilon(eps))
    ref = simulate_srpt(inst, UNIT_SPEED)
    return make_context(fast, ref)


def records_by_label(report, prefix):
    return [r for r in report.records if r.label.startswith(prefix)]


class TestPointQueries:
    def test_remaining_mid_service(self, e1_unit_trace):
        assert remaining_at(e1_unit_trace, 0, rat("1/2")) == rat("5/2")

    def test_remaining_at_release_is_size(self, e1_fast_trace):
        for j in e1_fast_trace.instance.jobs:
            assert remaining_at(e1_fast_trace, j.id, j.release) == j.size

    def test_remaining_at_completion_is_zero(self, e1_fast_trace):
        for j in e1_fast_trace.instance.jobs:
            assert remaining_at(e1_fast_trace, j.id, e1_fast_trace.completions[j.id]) == 0

    def test_backlog_examples_unit_pair(self, e1_unit_ctx):
        # finishing order on the unit trace: J1 (1) < J2 (2) < J0 (3)
        assert alg_backlog(e1_unit_ctx, 1, rat("1/2")) == rat("1/2")
        assert alg_backlog(e1_unit_ctx, 0, 0) == 4
        assert ref_backlog_smaller(e1_unit_ctx, 0, 0) == 4
        assert ref_backlog_smaller(e1_unit_ctx, 1, 0) == 1

    def test_backlog_zero_at_own_completion(self, e1_ctx):
        for j in e1_ctx.instance.jobs:
            assert alg_backlog(e1_ctx, j.id, e1_ctx.srpt_trace.completions[j.id]) == 0

    def test_ref_backlog_empty_after_reference_drains(self, e1_ctx):
        for j in e1_ctx.instance.jobs:
            assert ref_backlog_smaller(e1_ctx, j.id, 10) == 0


class TestBacklogBound:
    def test_e1_record_values(self, e1_unit_ctx):
        report = check_backlog_bound(e1_unit_ctx)
        assert report.verdict
        gap0 = [
            r for r in records_by_label(report, "backlog gap job 0") if r.time == 0
        ]
        assert gap0 and gap0[0].delta == 0 and gap0[0].bound == 6

    def test_release_with_empty_system(self):
        ctx = single_job_ctx(p="3", eps="1/2")
        report = check_backlog_bound(ctx)
        assert report.verdict
        rec = [r for r in records_by_label(report, "backlog gap job 0") if r.time == 0][0]
        assert rec.bound == 3 and rec.slack > 0

    def test_fast_pair_passes(self, e1_ctx):
        report = check_backlog_bound(e1_ctx)
        assert report.verdict
        assert report.worst_slack is not None and report.worst_slack >= 0

    def test_identity_records_all_pass(self, e1_ctx):
        report = check_backlog_bound(e1_ctx)
        idents = records_by_label(report, "small-volume identity")
        assert idents and all(r.passed and r.delta == 0 for r in idents)

    @pytest.mark.parametrize("seed", range(15))
    def test_random_pairs_all_references(self, seed):
        inst = random_integer_instance(seed)
        fast = simulate_srpt(inst, SpeedConfig.from_speed("3/2"))
        refs = [
            simulate_srpt(inst, UNIT_SPEED),
            simulate_policy(inst, UNIT_SPEED, fifo_priority),
            brute_force_opt(inst, k=1).trace,
        ]
        for ref in refs:
            assert check_backlog_bound(make_context(fast, ref)).verdict


class TestFlowPotential:
    def test_zero_before_first_event(self, e1_ctx):
        assert flow_potential(e1_ctx, 0, pre_event=True) == 0

    def test_zero_after_everything(self, e1_ctx):
        assert flow_potential(e1_ctx, 3) == 0
        assert flow_potential(e1_ctx, 100) == 0

    def test_e1_initial_value(self, e1_ctx):
        # terms at t=0: J0 contributes 4 + 2*3 - 4 = 6, J1 contributes
        # 1 + 2*1 - 1 = 2; scaling 1/(m*eps) = 1 gives 8
        assert flow_potential(e1_ctx, 0) == 8

    def test_requires_positive_eps(self, e1_unit_ctx):
        with pytest.raises(AnalysisError, match="epsilon must be positive"):
            flow_potential(e1_unit_ctx, 0)


class TestFlowConditions:
    def test_e1_report_values(self, e1_ctx):
        reports = check_flow_conditions(e1_ctx)
        assert reports.all_pass

        arr = {r.label: r for r in reports.arrival.records if r.bound is not None}
        assert arr["arrival job 0"].delta == 6 and arr["arrival job 0"].bound == 12
        assert arr["arrival job 1"].delta == 2 and arr["arrival job 1"].bound == 4
        assert arr["arrival job 2"].delta == 2 and arr["arrival job 2"].bound == 4
        assert reports.arrival.aggregate == 10

        comp = records_by_label(reports.completion, "completion job")
        assert [r.delta for r in comp] == [rat("1/3"), rat("1/3"), 1]
        agg = records_by_label(reports.completion, "aggregate completion charge")[0]
        assert agg.delta == rat("5/3") and agg.bound == 15

        assert reports.running.aggregate == rat("-25/3")
        assert all(r.delta <= 0 for r in records_by_label(reports.running, "drift"))

        bound_rec = reports.objective_bound.records[0]
        assert bound_rec.delta == rat("10/3") and bound_rec.bound == 40

    def test_boundary_potentials_zero(self, e1_ctx):
        reports = check_flow_conditions(e1_ctx)
        for label in ("potential before first event", "potential after final event"):
            rec = records_by_label(reports.completion, label)[0]
            assert rec.passed and rec.delta == 0

    def test_single_job_closed_forms(self):
        p, eps = rat(3), rat("1/4")
        ctx = single_job_ctx(p=p, eps=eps)
        reports = check_flow_conditions(ctx)
        assert reports.all_pass
        arr = records_by_label(reports.arrival, "arrival job 0")[0]
        assert arr.delta == p / eps and arr.bound == 2 * p / eps
        comp = records_by_label(reports.completion, "completion job 0")[0]
        assert comp.delta == p / (1 + eps)
        # exact telescoping forces the interval drift to -p/eps
        assert reports.running.aggregate == -p / eps
        assert reports.objective_bound.records[0].delta == p / (1 + eps)

    def test_requires_positive_eps(self, e1_unit_ctx):
        with pytest.raises(AnalysisError, match="epsilon must be positive"):
            check_flow_conditions(e1_unit_ctx)

    @pytest.mark.parametrize("seed", range(12))
    @pytest.mark.parametrize("eps", ("1/4", "1/2", "1"))
    def test_random_contexts_pass(self, seed, eps):
        inst = random_integer_instance(seed)
        fast = simulate_srpt(inst, SpeedConfig.from_epsilon(eps))
        ref = simulate_srpt(inst, UNIT_SPEED)
        reports = check_flow_conditions(make_context(fast, ref))
        assert reports.all_pass


class TestPowerPotential:
    def test_empty_queue(self, e1_ctx):
        assert power_flow_potential(e1_ctx, 100, k=2) == 0
        assert power_flow_potential(e1_ctx, 0, k=2, pre_event=True) == 0

    def test_single_job_at_release(self):
        # only the arriving job is alive, t - release = 0, so the potential
        # collapses to scale * (inner volume / (m*eps))^k
        p, eps, k = rat(1), rat("1/2"), 2
        ctx = single_job_ctx(p=p, eps=eps)
        expected = (p / (eps * (1 - eps))) ** k
        assert power_flow_potential(ctx, 0, k=k) == expected == 16

    def test_eps_range_enforced(self, e1_instance):
        fast = simulate_srpt(e1_instance, SpeedConfig.from_epsilon(1))
        ref = simulate_srpt(e1_instance, UNIT_SPEED)
        ctx = make_context(fast, ref)
        with pytest.raises(AnalysisError, match="out of theorem range"):
            power_flow_potential(ctx, 0, k=2)

    @pytest.mark.parametrize("k", (1, 2))
    def test_reconstructs_from_point_queries(self, k):
        # rebuild the potential per job from the public backlog queries and
        # compare; where no job's max-expression clamps, k=1 additionally
        # ties to the average-flow potential in closed form
        zero = rat(0)
        for seed in range(8):
            inst = random_integer_instance(seed)
            fast = simulate_srpt(inst, SpeedConfig.from_epsilon("1/4"))
            ref = simulate_srpt(inst, UNIT_SPEED)
            ctx = make_context(fast, ref)
            eps = ctx.epsilon
            m = inst.machines
            scale = (1 - eps) ** (-k)
            for t in events_of(inst, fast.completions):
                alive = [
                    j.id
                    for j in inst.jobs
                    if j.release <= t < fast.completions[j.id]
                ]
                expected = zero
                clamped = False
                ages = zero
                for jid in alive:
                    job = inst.job(jid)
                    inner = (
                        alg_backlog(ctx, jid, t)
                        + m * remaining_at(fast, jid, t)
                        - ref_backlog_smaller(ctx, jid, t)
                    ) / (m * eps)
                    g = (t - job.release) + inner
                    clamped = clamped or g < 0
                    expected += scale * (max(g, zero)) ** k - (t - job.release) ** k
                    ages += t - job.release
                assert power_flow_potential(ctx, t, k=k) == expected
                if k == 1 and not clamped:
                    tied = (ages + flow_potential(ctx, t)) / (1 - eps) - ages
                    assert expected == tied


class TestPowerConditions:
    def test_e1_squared_flow(self, e1_ctx):
        reports = check_power_flow_conditions(e1_ctx, k=2)
        assert reports.all_pass

        arr = {r.label: r for r in reports.arrival.records if r.bound is not None}
        assert arr["arrival job 0"].delta == 144 and arr["arrival job 0"].bound == 576
        assert arr["arrival job 1"].delta == 16 and arr["arrival job 1"].bound == 64
        assert arr["arrival job 2"].delta == 16 and arr["arrival job 2"].bound == 64
        assert reports.arrival.aggregate == 176

        # jumps + drift telescope exactly to the squared-flow objective
        assert reports.completion.aggregate == 0
        assert reports.running.aggregate == rat("-1540/9")
        total = (
            reports.arrival.aggregate
            + reports.completion.aggregate
            + reports.running.aggregate
        )
        assert total == objectives(e1_ctx.srpt_trace, ks=(2,)).kth_power_flow[2] == rat("44/9")

    def test_e1_global_bound_vs_oracle(self, e1_instance, e1_fast_trace):
        oracle = brute_force_opt(e1_instance, k=2)
        ctx = make_context(e1_fast_trace, oracle.trace, k=2)
        reports = check_power_flow_conditions(ctx)
        rec = reports.objective_bound.records[0]
        assert rec.passed
        # factor at eps=1/2, k=2: (2/(eps(1-eps)))^2 + ((1+eps)/eps^2)^2 = 100
        assert rec.bound == 100 * oracle.objective

    def test_single_job_squared(self):
        ctx = single_job_ctx(p="2", eps="1/2")
        reports = check_power_flow_conditions(ctx, k=2)
        assert reports.all_pass
        # one alive job keeps its max-expression positive, so no roots are
        # crossed and every drift interval stays whole
        drifts = records_by_label(reports.running, "drift")
        assert drifts and all(r.delta <= 0 for r in drifts)

    def test_k1_bound_looser_than_flow_bound(self, e1_ctx):
        flow = check_flow_conditions(e1_ctx)
        power = check_power_flow_conditions(e1_ctx, k=1)
        assert flow.all_pass and power.all_pass
        eps = e1_ctx.epsilon
        fa = {r.label: r for r in flow.arrival.records if r.bound is not None}
        pa = {r.label: r for r in power.arrival.records if r.bound is not None}
        assert set(fa) == set(pa)
        for label, frec in fa.items():
            assert pa[label].bound == frec.bound / (1 - eps)
            assert pa[label].bound > frec.bound

    def test_power_never_fails_where_flow_passes(self):
        for seed in range(10):
            inst = random_integer_instance(seed)
            fast = simulate_srpt(inst, SpeedConfig.from_epsilon("1/2"))
            ref = simulate_srpt(inst, UNIT_SPEED)
            ctx = make_context(fast, ref)
            if check_flow_conditions(ctx).all_pass:
                assert check_power_flow_conditions(ctx, k=1).all_pass

    def test_eps_range_enforced(self, e1_instance):
        fast = simulate_srpt(e1_instance, SpeedConfig.from_epsilon(1))
        ref = simulate_srpt(e1_instance, UNIT_SPEED)
        with pytest.raises(AnalysisError, match="out of theorem range"):
            check_power_flow_conditions(make_context(fast, ref), k=2)

    @pytest.mark.parametrize("seed", range(8))
    @pytest.mark.parametrize("k", (2, 3))
    def test_random_contexts_pass(self, seed, k):
        inst = random_integer_instance(seed)
        fast = simulate_srpt(inst, SpeedConfig.from_epsilon("1/4"))
        ref = simulate_srpt(inst, UNIT_SPEED)
        assert check_power_flow_conditions(make_context(fast, ref), k=k).all_pass


class TestCompletionCharge:
    def test_e1_aggregate(self, e1_ctx):
        report = check_completion_charge(e1_ctx, k=1)
        assert report.verdict
        agg = records_by_label(report, "aggregate charge")[0]
        assert agg.delta == rat("5/6")
        assert agg.bound == rat("15/2")
        assert report.aggregate == rat("5/6")

    def test_single_job_closed_forms(self):
        p, eps = rat(4), rat("1/2")
        ctx = single_job_ctx(p=p, eps=eps)
        report = check_completion_charge(ctx, k=1)
        assert report.verdict
        agg = records_by_label(report, "aggregate charge")[0]
        assert agg.delta == p * eps / (1 + eps)
        pair = records_by_label(report, "window bound pair (0, 0)")[0]
        assert pair.delta == p * eps / (1 + eps) ** 2
        assert pair.bound == p
        assert not pair.in_aggregate

    def test_vacuous_contributor_set(self):
        # hand-built reference: run the short job in the middle so that by
        # the time the fast schedule finishes it, the reference already has;
        # the only other alive job is larger, so nothing qualifies
        inst = make_instance([(0, 0, 2), (1, 1, 1)], machines=1)
        fast = simulate_srpt(inst, SpeedConfig.from_epsilon("1/2"))
        assert fast.completions == (rat("4/3"), 2)
        completions = (rat(3), rat(2))
        ref = ExecutionTrace(
            instance=inst,
            speed=UNIT_SPEED,
            segments=(
                Segment(rat(0), rat(1), (0,)),
                Segment(rat(1), rat(2), (1,)),
                Segment(rat(2), rat(3), (0,)),
            ),
            completions=completions,
            events=events_of(inst, completions),
        )
        ctx = make_context(fast, ref)
        report = check_completion_charge(ctx, k=1)
        assert report.verdict
        assert records_by_label(report, "window bound pair (0, 0)")
        assert not records_by_label(report, "window bound pair (1,")
        assert records_by_label(report, "aggregate charge")[0].delta == 1

    @pytest.mark.parametrize("k", (1, 2, 3))
    def test_oracle_reference_random(self, k):
        for seed in range(8):
            inst = random_integer_instance(seed)
            fast = simulate_srpt(inst, SpeedConfig.from_epsilon("1/4"))
            oracle = brute_force_opt(inst, k=k)
            ctx = make_context(fast, oracle.trace, k=k)
            assert check_completion_charge(ctx).verdict

    def test_eps_range_enforced(self, e1_instance):
        fast = simulate_srpt(e1_instance, SpeedConfig.from_epsilon(1))
        ref = simulate_srpt(e1_instance, UNIT_SPEED)
        with pytest.raises(AnalysisError, match="out of theorem range"):
            check_completion_charge(make_context(fast, ref), k=1)


class TestContextValidation:
    def test_mismatched_instances(self, e1_fast_trace):
        other = make_instance([(0, 0, 1)], machines=2)
        ref = simulate_srpt(other, UNIT_SPEED)
        with pytest.raises(AnalysisError, match="different instances"):
            make_context(e1_fast_trace, ref)

    def test_reference_must_be_unit_speed(self, e1_fast_trace):
        with pytest.raises(AnalysisError, match="unit speed"):
            make_context(e1_fast_trace, e1_fast_trace)

    def test_bad_k(self, e1_fast_trace, e1_unit_trace):
        with pytest.raises(AnalysisError, match="k must be an integer >= 1"):
            make_context(e1_fast_trace, e1_unit_trace, k=0)

    def test_infeasible_trace_rejected(self, e1_fast_trace, e1_unit_trace):
        broken = ExecutionTrace(
            instance=e1_fast_trace.instance,
            speed=e1_fast_trace.speed,
            segments=e1_fast_trace.segments[:-1],
            completions=e1_fast_trace.completions,
            events=e1_fast_trace.events,
        )
        with pytest.raises(AnalysisError, match="fast trace infeasible"):
            make_context(broken, e1_unit_trace)

    def test_empty_instance_all_checks(self):
        inst = make_instance([], machines=2)
        fast = simulate_srpt(inst, SpeedConfig.from_epsilon("1/2"))
        ref = simulate_srpt(inst, UNIT_SPEED)
        ctx = make_context(fast, ref)
        assert check_backlog_bound(ctx).verdict
        assert check_flow_conditions(ctx).all_pass
        assert check_power_flow_conditions(ctx, k=2).all_pass
        assert check_completion_charge(ctx, k=1).verdict


class TestReportExport:
    def test_passing_shape(self, e1_ctx):
        report = check_backlog_bound(e1_ctx)
        doc = report_to_json(report, params={"eps": e1_ctx.epsilon, "k": 1})
        assert doc["check"] == "backlog-bound"
        assert doc["verdict"] == "pass"
        assert doc["witnesses"] == []
        assert doc["params"] == {"eps": "1/2", "k": "1"}
        assert doc["n_events"] == len(report.records)
        assert isinstance(doc["worst_slack"], str)

    def test_failing_report_carries_witnesses(self):
        failing = _mk_report("demo", [_rec_le(rat(1), "too big", rat(2), rat(1))])
        assert not failing.verdict
        doc = report_to_json(failing)
        assert doc["verdict"] == "fail"
        assert doc["witnesses"] == [
            {"time": "1", "label": "too big", "delta": "2", "bound": "1"}
        ]
