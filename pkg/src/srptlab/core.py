"""Domain types for preemptive scheduling on identical machines.

All fields are exact Rationals and every type is immutable after construction,
so instances, traces and summaries can be shared freely between threads and
serialized byte-identically.
"""

from __future__ import annotations

from dataclasses import dataclass

from .rationals import Rational, ZERO, rat


class InstanceError(ValueError):
    """Raised when a job set or machine count is malformed."""


class TraceError(ValueError):
    """Raised when a trace is structurally unusable (validation errors are
    reported as violation lists instead)."""


@dataclass(frozen=True)
class Job:
    id: int
    release: Rational
    size: Rational


@dataclass(frozen=True)
class Instance:
    jobs: tuple
    machines: int

    @property
    def n(self) -> int:
        return len(self.jobs)

    def job(self, jid: int) -> Job:
        for j in self.jobs:
            if j.id == jid:
                return j
        raise KeyError(jid)


@dataclass(frozen=True)
class SpeedConfig:
    """Machine speed s and the augmentation eps, kept exactly in sync.

    eps may be 0 (or even negative) for exploratory runs; the potential
    checks reject such configs themselves.
    """

    speed: Rational
    epsilon: Rational

    def __post_init__(self):
        if self.speed != 1 + self.epsilon:
            raise InstanceError("speed must equal 1 + epsilon exactly")

    @classmethod
    def from_speed(cls, speed) -> "SpeedConfig":
        s = rat(speed)
        return cls(speed=s, epsilon=s - 1)

    @classmethod
    def from_epsilon(cls, epsilon) -> "SpeedConfig":
        e = rat(epsilon)
        return cls(speed=1 + e, epsilon=e)


UNIT_SPEED = SpeedConfig.from_speed(1)


@dataclass(frozen=True)
class Segment:
    """A maximal interval with a fixed machine assignment.

    assignment[i] is the job id running on machine i, or None for idle.
    """

    start: Rational
    end: Rational
    assignment: tuple


@dataclass(frozen=True)
class ExecutionTrace:
    instance: Instance
    speed: SpeedConfig
    segments: tuple
    completions: tuple  # indexed by job id
    events: tuple  # sorted distinct event times (arrivals and completions)


@dataclass(frozen=True)
class FlowSummary:
    """Flow-time objectives of one trace, exact except the rendered norms."""

    flows: tuple  # per-job completion - release, indexed by job id
    total_flow: Rational
    kth_power_flow: dict  # k -> sum of flow^k (Rational)
    lk_norm: dict  # k -> 12-significant-digit decimal string


def build_jobs(triples) -> tuple:
    """Make a Job tuple from (id, release, size) triples; values go through rat()."""
    return tuple(Job(id=int(i), release=rat(r), size=rat(p)) for i, r, p in triples)


def validate_instance(instance: Instance) -> Instance:
    """Check instance invariants and return the canonically sorted copy.

    Jobs are ordered by (release, id); ids must be exactly 0..n-1.
    """
    if not isinstance(instance.machines, int) or instance.machines < 1:
        raise InstanceError("machines must be >= 1")
    jobs = sorted(instance.jobs, key=lambda j: (j.release, j.id))
    seen = set()
    for j in jobs:
        if j.id in seen:
            raise InstanceError("duplicate id %d" % j.id)
        seen.add(j.id)
        if j.size <= 0:
            raise InstanceError("non-positive size for job %d" % j.id)
        if j.release < 0:
            raise InstanceError("negative release for job %d" % j.id)
    if seen and (min(seen) != 0 or max(seen) != len(seen) - 1):
        raise InstanceError("job ids must be dense 0..n-1")
    return Instance(jobs=tuple(jobs), machines=instance.machines)


def make_instance(triples, machines: int) -> Instance:
    return validate_instance(Instance(jobs=build_jobs(triples), machines=machines))


def events_of(instance: Instance, completions) -> tuple:
    times = {j.release for j in instance.jobs}
    times.update(completions)
    return tuple(sorted(times))


def validate_trace(trace: ExecutionTrace):
    """Exact feasibility audit of a trace against its instance.

    Returns (ok, violations); each violation string pinpoints the segment
    and job involved. No tolerances: every check is rational equality or
    ordering.
    """
    violations = []
    inst = trace.instance
    m = inst.machines
    n = inst.n
    jobs = {j.id: j for j in inst.jobs}

    if len(trace.completions) != n:
        violations.append("completions cover %d of %d jobs" % (len(trace.completions), n))
        return False, violations

    # segment structure: partition of [0, max completion], positive lengths
    prev_end = ZERO
    for idx, seg in enumerate(trace.segments):
        if seg.start != prev_end:
            violations.append(
                "segment %d: starts at %s, expected %s" % (idx, seg.start, prev_end)
            )
        if seg.start >= seg.end:
            violations.append("segment %d: empty or reversed interval" % idx)
        if len(seg.assignment) != m:
            violations.append("segment %d: %d machine slots, expected %d"
                              % (idx, len(seg.assignment), m))
        busy = [jid for jid in seg.assignment if jid is not None]
        for jid in busy:
            if jid not in jobs:
                violations.append("segment %d: unknown job %s" % (idx, jid))
        if len(set(busy)) != len(busy):
            dup = sorted({j for j in busy if busy.count(j) > 1})
            violations.append(
                "segment %d: parallel self-processing of job %d" % (idx, dup[0])
            )
        prev_end = seg.end

    if n:
        horizon = max(trace.completions)
        if trace.segments:
            if trace.segments[0].start != 0:
                violations.append("segment 0: trace does not start at 0")
            if prev_end != horizon:
                violations.append(
                    "segments end at %s, max completion is %s" % (prev_end, horizon)
                )
        else:
            violations.append("no segments but %d jobs" % n)
    elif trace.segments:
        violations.append("segments present for an empty instance")

    # per-job: service only inside [release, completion], exact conservation,
    # completion time consistent with the last assigned segment
    speed = trace.speed.speed
    for jid, job in sorted(jobs.items()):
        comp = trace.completions[jid]
        service = ZERO
        last_end = None
        for idx, seg in enumerate(trace.segments):
            if jid in seg.assignment:
                if seg.start < job.release:
                    violations.append(
                        "segment %d: job %d runs before its release" % (idx, jid)
                    )
                if seg.end > comp:
                    violations.append(
                        "segment %d: job %d runs after its completion" % (idx, jid)
                    )
                service += seg.end - seg.start
                last_end = seg.end
        work = service * speed
        if work < job.size:
            violations.append(
                "work deficit for job %d: %s of %s" % (jid, work, job.size)
            )
        elif work > job.size:
            violations.append(
                "work surplus for job %d: %s of %s" % (jid, work, job.size)
            )
        if comp < job.release:
            violations.append("job %d completes before release" % jid)
        if last_end is None:
            violations.append("job %d never scheduled" % jid)
        elif last_end != comp:
            violations.append(
                "job %d: last service ends %s, completion says %s"
                % (jid, last_end, comp)
            )

    expected_events = events_of(inst, trace.completions)
    if tuple(trace.events) != expected_events:
        violations.append("event list out of sync with arrivals and completions")

    return not violations, violations
