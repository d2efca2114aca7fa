"""srptlab: exact-arithmetic SRPT scheduling simulator and analysis verifier.

The package simulates Shortest-Remaining-Processing-Time scheduling on
identical machines with a rational speed multiplier, compares the result
against reference schedules (including a brute-force optimum at desk scale),
and verifies the amortized-analysis conditions behind the scheduler's
competitive guarantees, all in exact rational arithmetic.
"""

from .analysis import (
    AnalysisError,
    CheckRecord,
    ConditionReports,
    PairContext,
    PotentialReport,
    alg_backlog,
    check_backlog_bound,
    check_completion_charge,
    check_flow_conditions,
    check_power_flow_conditions,
    flow_potential,
    make_context,
    objectives,
    power_flow_potential,
    ref_backlog_smaller,
    remaining_at,
    report_to_json,
)
from .core import (
    ExecutionTrace,
    FlowSummary,
    Instance,
    InstanceError,
    Job,
    Segment,
    SpeedConfig,
    TraceError,
    UNIT_SPEED,
    build_jobs,
    events_of,
    make_instance,
    validate_instance,
    validate_trace,
)
from .engine import (
    EngineError,
    SimState,
    fifo_priority,
    initial_state,
    longest_remaining_priority,
    next_event,
    simulate_policy,
    simulate_srpt,
    srpt_priority,
)
from .formats import (
    ParseError,
    dump_json,
    instance_from_json,
    instance_to_json,
    parse_instance,
    serialize_instance,
    trace_from_json,
    trace_to_json,
)
from .oracle import (
    DEFAULT_LIMITS,
    OracleError,
    OracleLimits,
    OracleResult,
    ReferenceSchedule,
    brute_force_opt,
    reference_schedules,
    single_machine_relaxation_lb,
)
from .rationals import Rational, RationalParseError, decimal_str, kth_root_str, rat
from .workload import FAMILIES, GenSpec, WorkloadError, XorShift64Star, generate

__version__ = "0.1.0"

__all__ = [
    "AnalysisError",
    "CheckRecord",
    "ConditionReports",
    "DEFAULT_LIMITS",
    "EngineError",
    "ExecutionTrace",
    "FAMILIES",
    "FlowSummary",
    "GenSpec",
    "Instance",
    "InstanceError",
    "Job",
    "OracleError",
    "OracleLimits",
    "OracleResult",
    "PairContext",
    "ParseError",
    "PotentialReport",
    "Rational",
    "RationalParseError",
    "ReferenceSchedule",
    "Segment",
    "SimState",
    "SpeedConfig",
    "TraceError",
    "UNIT_SPEED",
    "WorkloadError",
    "XorShift64Star",
    "alg_backlog",
    "brute_force_opt",
    "build_jobs",
    "check_backlog_bound",
    "check_completion_charge",
    "check_flow_conditions",
    "check_power_flow_conditions",
    "decimal_str",
    "dump_json",
    "events_of",
    "fifo_priority",
    "flow_potential",
    "generate",
    "initial_state",
    "instance_from_json",
    "instance_to_json",
    "kth_root_str",
    "longest_remaining_priority",
    "make_context",
    "make_instance",
    "next_event",
    "objectives",
    "parse_instance",
    "power_flow_potential",
    "rat",
    "ref_backlog_smaller",
    "reference_schedules",
    "remaining_at",
    "report_to_json",
    "serialize_instance",
    "simulate_policy",
    "simulate_srpt",
    "single_machine_relaxation_lb",
    "srpt_priority",
    "trace_from_json",
    "trace_to_json",
    "validate_instance",
    "validate_trace",
]
