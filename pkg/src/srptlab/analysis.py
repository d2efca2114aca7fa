"""Exact verification harness for flow-time guarantees of speed-augmented SRPT.

Everything here compares a fast trace (machines of speed 1+eps running SRPT)
against a unit-speed reference trace over the same instance, entirely in
rational arithmetic. The checks mirror an amortized analysis:

* a backlog bound relating the fast schedule's unfinished volume to the
  reference's, holding at all times;
* a flow potential whose arrival jumps, completion jumps and between-event
  drift are each bounded, which telescopes to a total-flow guarantee;
* a k-th power variant of the same potential for the stronger objectives;
* a per-completion charging argument bounding the volume the reference still
  owes when the fast schedule finishes a job.

Conventions: at an event time, completions are applied before arrivals, ties
in job-id order; a job is alive at t when release <= t < completion, so
evaluation at event times is post-event unless a pre-event view is requested.
Between two consecutive event times every queried quantity is linear in t,
and power-mode intervals are subdivided exactly at the rational roots of each
job's clamped age expression, so endpoint checks on subintervals are sound.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import ExecutionTrace, FlowSummary, validate_trace
from .rationals import Rational, ZERO, kth_root_str


class AnalysisError(ValueError):
    pass


# --------------------------------------------------------------------------
# trace indexing

class _TraceIndex:
    """Per-trace query cache: service intervals per job, exact remaining volume."""

    def __init__(self, trace: ExecutionTrace):
        self.speed = trace.speed.speed
        self.release = {j.id: j.release for j in trace.instance.jobs}
        self.size = {j.id: j.size for j in trace.instance.jobs}
        self.completion = {jid: c for jid, c in enumerate(trace.completions)}
        ivs = {jid: [] for jid in self.release}
        for seg in trace.segments:
            for jid in seg.assignment:
                if jid is not None:
                    ivs[jid].append((seg.start, seg.end))
        self.intervals = ivs

    def remaining(self, jid: int, t) -> Rational:
        if t <= self.release[jid]:
            return self.size[jid]
        if t >= self.completion[jid]:
            return ZERO
        service = ZERO
        for a, b in self.intervals[jid]:
            if t <= a:
                break
            service += (b if b < t else t) - a
        return self.size[jid] - self.speed * service

    def alive(self, t) -> frozenset:
        return frozenset(
            j for j, r in self.release.items() if r <= t < self.completion[j]
        )

    def alive_pre(self, t) -> frozenset:
        return frozenset(
            j for j, r in self.release.items() if r < t <= self.completion[j]
        )


@dataclass(frozen=True)
class _StateEval:
    rem_alg: dict  # jid -> remaining in the fast schedule (0 if not alive)
    rem_ref: dict  # jid -> remaining in the reference (0 if not alive)
    ahead_alg: dict  # jid -> remaining fast volume on jobs finishing by jid
    ahead_ref_small: dict  # jid -> remaining reference volume on no-larger such jobs


class PairContext:
    """A fast trace and a unit-speed reference over one instance, plus caches.

    epsilon is taken from the fast trace's speed config; it may be 0 for
    backlog-only comparisons, while the potential checks demand eps > 0 and
    the power checks demand 0 < eps <= 1/2.
    """

    def __init__(self, srpt_trace: ExecutionTrace, ref_trace: ExecutionTrace, k: int = 1):
        self.srpt_trace = srpt_trace
        self.ref_trace = ref_trace
        self.epsilon = srpt_trace.speed.epsilon
        self.k = k
        self.instance = srpt_trace.instance
        self.machines = srpt_trace.instance.machines
        self.idx_alg = _TraceIndex(srpt_trace)
        self.idx_ref = _TraceIndex(ref_trace)
        # total order on the fast schedule's completions: (time, id)
        order = sorted((c, jid) for jid, c in enumerate(srpt_trace.completions))
        self.finish_rank = {jid: pos for pos, (_, jid) in enumerate(order)}
        self._states = {}

    def state(self, t, alive_alg: frozenset, alive_ref: frozenset) -> _StateEval:
        key = (t, alive_alg, alive_ref)
        hit = self._states.get(key)
        if hit is not None:
            return hit
        rem_alg = {j: self.idx_alg.remaining(j, t) for j in alive_alg}
        rem_ref = {j: self.idx_ref.remaining(j, t) for j in alive_ref}
        rank = self.finish_rank
        size = self.idx_alg.size
        ahead_alg = {}
        ahead_ref_small = {}
        for i in rank:
            ri = rank[i]
            si = size[i]
            acc = ZERO
            for j in alive_alg:
                if rank[j] <= ri:
                    acc += rem_alg[j]
            ahead_alg[i] = acc
            acc = ZERO
            for j in alive_ref:
                if rank[j] <= ri and size[j] <= si:
                    acc += rem_ref[j]
            ahead_ref_small[i] = acc
        out = _StateEval(rem_alg, rem_ref, ahead_alg, ahead_ref_small)
        self._states[key] = out
        return out


def make_context(srpt_trace: ExecutionTrace, ref_trace: ExecutionTrace, k: int = 1) -> PairContext:
    if srpt_trace.instance != ref_trace.instance:
        raise AnalysisError("traces cover different instances")
    if ref_trace.speed.speed != 1:
        raise AnalysisError("reference trace must run at unit speed")
    if not isinstance(k, int) or k < 1:
        raise AnalysisError("k must be an integer >= 1")
    for name, trace in (("fast", srpt_trace), ("reference", ref_trace)):
        ok, violations = validate_trace(trace)
        if not ok:
            raise AnalysisError(
                "%s trace infeasible: %s" % (name, "; ".join(violations[:3]))
            )
    return PairContext(srpt_trace, ref_trace, k)


# --------------------------------------------------------------------------
# point queries

def remaining_at(trace: ExecutionTrace, jid: int, t) -> Rational:
    """Remaining volume of one job at time t: full size before release, 0 after
    completion, exactly interpolated through its service intervals between."""
    return _TraceIndex(trace).remaining(jid, t)


def alg_backlog(ctx: PairContext, jid: int, t) -> Rational:
    """Remaining fast-schedule volume, at t, of jobs the fast schedule
    finishes no later than job jid (jid included while alive)."""
    st = ctx.state(t, ctx.idx_alg.alive(t), ctx.idx_ref.alive(t))
    return st.ahead_alg[jid]


def ref_backlog_smaller(ctx: PairContext, jid: int, t) -> Rational:
    """Remaining reference volume, at t, of jobs no larger than jid that the
    fast schedule finishes no later than jid."""
    st = ctx.state(t, ctx.idx_alg.alive(t), ctx.idx_ref.alive(t))
    return st.ahead_ref_small[jid]


def objectives(trace: ExecutionTrace, ks=(1, 2, 3)) -> FlowSummary:
    """Per-job flows and the requested k-th power objectives, all exact; the
    lk norms are 12-significant-digit decimal strings of the k-th roots."""
    flows = tuple(
        trace.completions[j.id] - j.release
        for j in sorted(trace.instance.jobs, key=lambda j: j.id)
    )
    total = sum(flows, ZERO)
    powers = {}
    norms = {}
    for k in ks:
        if not isinstance(k, int) or k < 1:
            raise AnalysisError("k must be an integer >= 1")
        val = sum((f ** k for f in flows), ZERO)
        powers[k] = val
        norms[k] = kth_root_str(val, k)
    return FlowSummary(flows=flows, total_flow=total, kth_power_flow=powers, lk_norm=norms)


# --------------------------------------------------------------------------
# check records and reports

@dataclass(frozen=True)
class CheckRecord:
    time: Rational | None
    label: str
    delta: Rational
    bound: Rational | None  # None = informational record, always passes
    slack: Rational | None
    passed: bool
    in_aggregate: bool = True


def _rec_le(time, label, delta, bound, in_aggregate=True) -> CheckRecord:
    slack = bound - delta
    return CheckRecord(time, label, delta, bound, slack, slack >= 0, in_aggregate)


def _rec_eq(time, label, delta) -> CheckRecord:
    slack = -abs(delta)
    return CheckRecord(time, label, delta, ZERO, slack, delta == 0, True)


def _rec_info(time, label, delta) -> CheckRecord:
    return CheckRecord(time, label, delta, None, None, True, True)


@dataclass(frozen=True)
class PotentialReport:
    condition: str
    records: tuple
    aggregate: Rational
    worst_slack: Rational | None
    verdict: bool

    @property
    def failures(self):
        return tuple(r for r in self.records if not r.passed)


def _mk_report(condition: str, records) -> PotentialReport:
    records = tuple(records)
    aggregate = sum((r.delta for r in records if r.in_aggregate), ZERO)
    slacks = [r.slack for r in records if r.slack is not None]
    return PotentialReport(
        condition=condition,
        records=records,
        aggregate=aggregate,
        worst_slack=min(slacks) if slacks else None,
        verdict=all(r.passed for r in records),
    )


@dataclass(frozen=True)
class ConditionReports:
    """Arrival, completion and running condition reports for one potential,
    plus the implied end-to-end objective bound."""

    arrival: PotentialReport
    completion: PotentialReport
    running: PotentialReport
    objective_bound: PotentialReport
    k: int

    @property
    def all_pass(self) -> bool:
        return (
            self.arrival.verdict
            and self.completion.verdict
            and self.running.verdict
            and self.objective_bound.verdict
        )

    @property
    def reports(self):
        return (self.arrival, self.completion, self.running, self.objective_bound)


def report_to_json(report: PotentialReport, params: dict | None = None) -> dict:
    return {
        "check": report.condition,
        "params": {key: str(val) for key, val in (params or {}).items()},
        "n_events": len(report.records),
        "worst_slack": None if report.worst_slack is None else str(report.worst_slack),
        "verdict": "pass" if report.verdict else "fail",
        "witnesses": [
            {
                "time": None if r.time is None else str(r.time),
                "label": r.label,
                "delta": str(r.delta),
                "bound": None if r.bound is None else str(r.bound),
            }
            for r in report.failures
        ],
    }


# --------------------------------------------------------------------------
# backlog bound (holds against every feasible unit-speed reference)

def check_backlog_bound(ctx: PairContext) -> PotentialReport:
    """At every merged event time and segment midpoint t >= release(i):
    fast backlog ahead of i minus the reference's small-job backlog ahead of i
    never exceeds machines * size(i); and the fast backlog equals its own
    restriction to jobs with remaining volume <= size(i)."""
    m = ctx.machines
    size = ctx.idx_alg.size
    rank = ctx.finish_rank
    records = []
    for t in _check_grid(ctx):
        alive_alg = ctx.idx_alg.alive(t)
        alive_ref = ctx.idx_ref.alive(t)
        st = ctx.state(t, alive_alg, alive_ref)
        for i in sorted(rank):
            if ctx.idx_alg.release[i] > t:
                continue
            records.append(
                _rec_le(
                    t,
                    "backlog gap job %d" % i,
                    st.ahead_alg[i] - st.ahead_ref_small[i],
                    m * size[i],
                )
            )
            small = ZERO
            ri = rank[i]
            for j in alive_alg:
                if rank[j] <= ri and st.rem_alg[j] <= size[i]:
                    small += st.rem_alg[j]
            records.append(
                _rec_eq(t, "small-volume identity job %d" % i, small - st.ahead_alg[i])
            )
    return _mk_report("backlog-bound", records)


def _boundaries(ctx: PairContext):
    times = {ZERO}
    times.update(ctx.srpt_trace.events)
    times.update(ctx.ref_trace.events)
    return sorted(times)


def _check_grid(ctx: PairContext):
    bounds = _boundaries(ctx)
    grid = list(bounds)
    for a, b in zip(bounds, bounds[1:]):
        grid.append((a + b) / 2)
    return sorted(grid)


# --------------------------------------------------------------------------
# potential conditions, average-flow and k-th power modes

def flow_potential(ctx: PairContext, t, pre_event: bool = False) -> Rational:
    """Queue-wide potential for the total-flow analysis, evaluated post-event
    at event times unless pre_event is set."""
    _require_eps_positive(ctx)
    alive_alg, alive_ref = _natural_sets(ctx, t, pre_event)
    return _phi_avg(ctx, t, alive_alg, alive_ref)


def power_flow_potential(ctx: PairContext, t, k: int | None = None, pre_event: bool = False) -> Rational:
    """Queue-wide potential for the k-th power flow analysis (0 < eps <= 1/2)."""
    k = ctx.k if k is None else k
    _require_eps_power(ctx, k)
    alive_alg, alive_ref = _natural_sets(ctx, t, pre_event)
    return _phi_power(ctx, t, alive_alg, alive_ref, k)


def _natural_sets(ctx, t, pre_event):
    if pre_event:
        return ctx.idx_alg.alive_pre(t), ctx.idx_ref.alive_pre(t)
    return ctx.idx_alg.alive(t), ctx.idx_ref.alive(t)


def _require_eps_positive(ctx):
    if ctx.epsilon <= 0:
        raise AnalysisError("epsilon must be positive for potential checks")


def _require_eps_power(ctx, k):
    if not isinstance(k, int) or k < 1:
        raise AnalysisError("k must be an integer >= 1")
    if ctx.epsilon <= 0 or ctx.epsilon > Rational(1, 2):
        raise AnalysisError("epsilon out of theorem range (need 0 < eps <= 1/2)")


def _phi_avg(ctx, t, alive_alg, alive_ref) -> Rational:
    st = ctx.state(t, alive_alg, alive_ref)
    m = ctx.machines
    tot = ZERO
    for i in alive_alg:
        tot += st.ahead_alg[i] + m * st.rem_alg[i] - st.ahead_ref_small[i]
    return tot / (m * ctx.epsilon)


def _clamped_age(ctx, st, t, i) -> Rational:
    """Age of job i plus its normalized backlog gap, the quantity whose clamp
    at zero drives the power potential. Linear in t between events."""
    m = ctx.machines
    inner = st.ahead_alg[i] + m * st.rem_alg[i] - st.ahead_ref_small[i]
    return (t - ctx.idx_alg.release[i]) + inner / (m * ctx.epsilon)


def _phi_power(ctx, t, alive_alg, alive_ref, k) -> Rational:
    st = ctx.state(t, alive_alg, alive_ref)
    scale = (1 - ctx.epsilon) ** (-k)
    tot = ZERO
    for i in alive_alg:
        g = _clamped_age(ctx, st, t, i)
        if g > 0:
            tot += scale * g ** k
        tot -= (t - ctx.idx_alg.release[i]) ** k
    return tot


def _power_value(ctx, t, alive_alg, alive_ref, k) -> Rational:
    # objective accumulation + power potential over fixed alive sets; the
    # (t - release)^k sums cancel, leaving only the clamped terms
    st = ctx.state(t, alive_alg, alive_ref)
    scale = (1 - ctx.epsilon) ** (-k)
    tot = ZERO
    for i in alive_alg:
        g = _clamped_age(ctx, st, t, i)
        if g > 0:
            tot += scale * g ** k
    return tot


def check_flow_conditions(ctx: PairContext) -> ConditionReports:
    """Arrival jumps, completion charges and between-event drift of the
    total-flow potential, plus the implied 4/eps objective bound."""
    _require_eps_positive(ctx)
    return _condition_walk(ctx, power=False, k=1)


def check_power_flow_conditions(ctx: PairContext, k: int | None = None) -> ConditionReports:
    """Same walk for the k-th power potential (0 < eps <= 1/2); running
    intervals are subdivided at the exact roots of each clamped age."""
    k = ctx.k if k is None else k
    _require_eps_power(ctx, k)
    return _condition_walk(ctx, power=True, k=k)


def _condition_walk(ctx: PairContext, power: bool, k: int) -> ConditionReports:
    m = ctx.machines
    eps = ctx.epsilon
    release = ctx.idx_alg.release
    size = ctx.idx_alg.size
    bounds = _boundaries(ctx)
    half = Rational(1, 2)

    arrivals_at = {}
    for jid, r in release.items():
        arrivals_at.setdefault(r, []).append(jid)
    comp_alg_at = {}
    for jid, c in ctx.idx_alg.completion.items():
        comp_alg_at.setdefault(c, []).append(jid)
    comp_ref_at = {}
    for jid, c in ctx.idx_ref.completion.items():
        comp_ref_at.setdefault(c, []).append(jid)

    scale = (1 - eps) ** (-k) if power else None
    arrival_records = []
    completion_records = []
    running_records = []
    jump_total = ZERO
    drift_total = ZERO
    completion_jump_total = ZERO

    alive_alg = frozenset()
    alive_ref = frozenset()

    for pos, t in enumerate(bounds):
        finished_ref = comp_ref_at.get(t, ())
        if finished_ref:
            alive_ref = alive_ref - frozenset(finished_ref)
        finished_alg = sorted(comp_alg_at.get(t, ()))
        if finished_alg:
            st = ctx.state(t, alive_alg, alive_ref)
            for c in finished_alg:
                owed = st.ahead_ref_small[c]
                if power:
                    age = t - release[c]
                    g = age - owed / (m * eps)
                    jump = age ** k - (scale * g ** k if g > 0 else ZERO)
                    if owed <= m * eps * eps * age:
                        rec = _rec_le(
                            t, "completion job %d (drained case)" % c, jump, ZERO
                        )
                    else:
                        rec = _rec_le(
                            t,
                            "completion job %d (owed case)" % c,
                            jump,
                            (owed / m) ** k / eps ** (2 * k),
                        )
                else:
                    jump = owed / (m * eps)
                    rec = _rec_info(t, "completion job %d" % c, jump)
                completion_records.append(rec)
                jump_total += jump
                completion_jump_total += jump
            alive_alg = alive_alg - frozenset(finished_alg)
        for a in sorted(arrivals_at.get(t, ())):
            before = None
            if not power and alive_alg:
                before = ctx.state(t, alive_alg, alive_ref)
            prev_alive = alive_alg
            alive_alg = alive_alg | {a}
            alive_ref = alive_ref | {a}
            st = ctx.state(t, alive_alg, alive_ref)
            inner = st.ahead_alg[a] + m * st.rem_alg[a] - st.ahead_ref_small[a]
            if power:
                g = inner / (m * eps)  # age term is exactly 0 at release
                jump = scale * g ** k if g > 0 else ZERO
                bound = (2 / (eps * (1 - eps))) ** k * size[a] ** k
            else:
                jump = inner / (m * eps)
                bound = 2 * size[a] / eps
                if before is not None:
                    for i in sorted(prev_alive):
                        b_term = (
                            before.ahead_alg[i]
                            + m * before.rem_alg[i]
                            - before.ahead_ref_small[i]
                        )
                        a_term = (
                            st.ahead_alg[i] + m * st.rem_alg[i] - st.ahead_ref_small[i]
                        )
                        if a_term != b_term:
                            arrival_records.append(
                                _rec_eq(
                                    t,
                                    "arrival job %d shifts term of job %d" % (a, i),
                                    a_term - b_term,
                                )
                            )
            arrival_records.append(_rec_le(t, "arrival job %d" % a, jump, bound))
            jump_total += jump
        if pos + 1 == len(bounds):
            break
        b = bounds[pos + 1]
        if power:
            points = [t]
            st_a = ctx.state(t, alive_alg, alive_ref)
            st_b = ctx.state(b, alive_alg, alive_ref)
            roots = set()
            for i in alive_alg:
                ga = _clamped_age(ctx, st_a, t, i)
                gb = _clamped_age(ctx, st_b, b, i)
                if (ga > 0 > gb) or (ga < 0 < gb):
                    roots.add(t + ga * (b - t) / (ga - gb))
            points.extend(sorted(roots))
            points.append(b)
            for u, v in zip(points, points[1:]):
                mid = (u + v) * half
                val_u = _power_value(ctx, u, alive_alg, alive_ref, k)
                val_m = _power_value(ctx, mid, alive_alg, alive_ref, k)
                val_v = _power_value(ctx, v, alive_alg, alive_ref, k)
                running_records.append(
                    _rec_le(u, "drift on [%s, %s]" % (u, mid), val_m - val_u, ZERO)
                )
                running_records.append(
                    _rec_le(mid, "drift on [%s, %s]" % (mid, v), val_v - val_m, ZERO)
                )
                drift_total += val_v - val_u
        else:
            phi_a = _phi_avg(ctx, t, alive_alg, alive_ref)
            phi_b = _phi_avg(ctx, b, alive_alg, alive_ref)
            delta = len(alive_alg) * (b - t) + phi_b - phi_a
            running_records.append(
                _rec_le(t, "drift on [%s, %s]" % (t, b), delta, ZERO)
            )
            drift_total += delta

    if alive_alg or alive_ref:  # pragma: no cover - both traces end completed
        raise AnalysisError("internal: jobs alive after the final event")

    flows = [ctx.idx_alg.completion[j] - release[j] for j in release]
    alg_objective = sum((f ** k for f in flows), ZERO)
    ref_flows = [ctx.idx_ref.completion[j] - release[j] for j in release]
    ref_objective = sum((f ** k for f in ref_flows), ZERO)

    # the potential starts and ends at zero, so jumps plus drift must
    # reproduce the final objective exactly; any mismatch is a harness bug
    if jump_total + drift_total != alg_objective:
        raise AnalysisError(
            "internal: potential accounting mismatch (%s + %s != %s)"
            % (jump_total, drift_total, alg_objective)
        )

    end = bounds[-1] if bounds else ZERO
    boundary_records = [
        _rec_eq(ZERO, "potential before first event", _phi_at_empty(ctx, ZERO, power, k)),
        _rec_eq(end, "potential after final event", _phi_at_empty(ctx, end, power, k)),
    ]
    completion_records.extend(boundary_records)

    if not power:
        completion_records.append(
            _rec_le(
                None,
                "aggregate completion charge",
                completion_jump_total,
                (1 + eps) / eps * ref_objective,
            )
        )
        factor = 4 / eps
    else:
        factor = (2 / (eps * (1 - eps))) ** k + ((1 + eps) / eps ** 2) ** k
    bound_report = _mk_report(
        "objective-bound",
        [
            _rec_le(
                None,
                "final objective vs reference (factor %s)" % factor,
                alg_objective,
                factor * ref_objective,
            )
        ],
    )

    prefix = "power-" if power else "flow-"
    return ConditionReports(
        arrival=_mk_report(prefix + "arrival", arrival_records),
        completion=_mk_report(prefix + "completion", completion_records),
        running=_mk_report(prefix + "running", running_records),
        objective_bound=bound_report,
        k=k,
    )


def _phi_at_empty(ctx, t, power, k):
    empty = frozenset()
    if power:
        return _phi_power(ctx, t, empty, empty, k)
    return _phi_avg(ctx, t, empty, empty)


# --------------------------------------------------------------------------
# completion charging against the reference

def check_completion_charge(ctx: PairContext, k: int | None = None) -> PotentialReport:
    """When the fast schedule finishes job i, the reference still owes volume
    on no-larger jobs the fast schedule already finished. The aggregate of
    (owed/m)^k is bounded by (1+eps)^k times the reference objective, and a
    per-pair window inequality localizes the charge to reference flows."""
    k = ctx.k if k is None else k
    _require_eps_power(ctx, k)
    m = ctx.machines
    eps = ctx.epsilon
    release = ctx.idx_alg.release
    size = ctx.idx_alg.size
    rank = ctx.finish_rank
    comp_alg = ctx.idx_alg.completion
    comp_ref = ctx.idx_ref.completion
    jobs = sorted(rank)

    owed = {}
    contributors = {}
    for i in jobs:
        t = comp_alg[i]
        alive_ref = ctx.idx_ref.alive(t)
        st = ctx.state(t, ctx.idx_alg.alive(t), alive_ref)
        owed[i] = st.ahead_ref_small[i]
        contributors[i] = sorted(
            j for j in alive_ref if rank[j] <= rank[i] and size[j] <= size[i]
        )

    charged_to = {j: [] for j in jobs}
    for i in jobs:
        for j in contributors[i]:
            charged_to[j].append(i)

    records = []
    total = sum(((owed[i] / m) ** k for i in jobs), ZERO)
    ref_objective = sum(((comp_ref[j] - release[j]) ** k for j in jobs), ZERO)
    records.append(
        _rec_le(None, "aggregate charge", total, (1 + eps) ** k * ref_objective)
    )

    denom = (1 + eps) * m
    for i in jobs:
        t = comp_alg[i]
        for j in contributors[i]:
            earlier = sum(
                (ctx.idx_ref.remaining(a, t) for a in contributors[i] if release[a] < release[j]),
                ZERO,
            )
            lhs = (owed[i] - earlier) / denom
            later_charges = sum(
                (
                    ctx.idx_ref.remaining(j, comp_ref[a])
                    for a in charged_to[j]
                    if rank[a] > rank[i]
                ),
                ZERO,
            )
            rhs = comp_ref[j] - release[j] - later_charges / denom
            records.append(
                _rec_le(t, "window bound pair (%d, %d)" % (i, j), lhs, rhs, in_aggregate=False)
            )
    return _mk_report("completion-charge", records)
