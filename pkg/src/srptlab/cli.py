"""Command-line front end: simulate, verify, sweep, gen.

Exit codes are a stable contract: 0 success, 2 input error, 3 parameter
domain error, 4 verification or bound failure. All gating comparisons happen
on exact rationals; decimals appear only in rendered output.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor

from .analysis import (
    AnalysisError,
    check_backlog_bound,
    check_completion_charge,
    check_flow_conditions,
    check_power_flow_conditions,
    make_context,
    objectives,
    report_to_json,
)
from .core import (
    ExecutionTrace,
    InstanceError,
    Segment,
    SpeedConfig,
    UNIT_SPEED,
    validate_trace,
)
from .engine import fifo_priority, simulate_policy, simulate_srpt
from .formats import (
    ParseError,
    dump_json,
    parse_instance,
    serialize_instance,
    trace_to_json,
)
from .oracle import OracleError, brute_force_opt
from .rationals import ONE, Rational, RationalParseError, ZERO, decimal_str, rat
from .workload import FAMILIES, GenSpec, WorkloadError, generate

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_DOMAIN = 3
EXIT_VERIFY = 4

REF_NAMES = ("oracle", "unit-srpt", "fifo")
HALF = Rational(1, 2)


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


# --------------------------------------------------------------------------
# shared argument handling

def _read_instance(path: str):
    try:
        if path == "-":
            text = sys.stdin.read()
        else:
            with open(path, "r", encoding="utf-8") as fh:
                text = fh.read()
    except OSError as exc:
        raise CliError(EXIT_INPUT, "cannot read instance: %s" % exc)
    try:
        return parse_instance(text)
    except (ParseError, InstanceError) as exc:
        raise CliError(EXIT_INPUT, "bad instance: %s" % exc)


def _speed_config(text: str) -> SpeedConfig:
    try:
        speed = rat(text)
    except RationalParseError as exc:
        raise CliError(EXIT_INPUT, "bad speed: %s" % exc)
    if speed <= 0:
        raise CliError(EXIT_DOMAIN, "speed must be positive")
    return SpeedConfig.from_speed(speed)


def _k_list(text: str):
    toks = [tok.strip() for tok in text.split(",") if tok.strip()]
    try:
        ks = sorted({int(tok) for tok in toks})
    except ValueError:
        raise CliError(EXIT_INPUT, "bad k list %r (want comma-separated integers)" % text)
    if not ks or ks[0] < 1:
        raise CliError(EXIT_INPUT, "k values must be integers >= 1")
    return ks


def _ref_list(text: str):
    names = []
    for tok in text.split(","):
        tok = tok.strip()
        if not tok:
            continue
        if tok not in REF_NAMES:
            raise CliError(
                EXIT_INPUT, "unknown reference %r (choose from %s)" % (tok, ", ".join(REF_NAMES))
            )
        if tok not in names:
            names.append(tok)
    if not names:
        raise CliError(EXIT_INPUT, "empty reference list")
    return names


def _parse_span(text: str):
    parts = text.split(":")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError("want LO:HI, got %r" % text)
    try:
        lo, hi = int(parts[0]), int(parts[1])
    except ValueError:
        raise argparse.ArgumentTypeError("want integer LO:HI, got %r" % text)
    return (lo, hi)


def _write_text(path: str | None, text: str):
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise CliError(EXIT_INPUT, "cannot write %s: %s" % (path, exc))


# --------------------------------------------------------------------------
# simulate

def cmd_simulate(args) -> int:
    instance = _read_instance(args.instance)
    speed = _speed_config(args.speed)
    trace = simulate_srpt(instance, speed)
    summary = objectives(trace, ks=(1, 2, 3))

    print(
        "instance %s: %d jobs on %d machines at speed %s"
        % (args.instance, instance.n, instance.machines, speed.speed)
    )
    rows = [("job", "release", "size", "completion", "flow")]
    for job in sorted(instance.jobs, key=lambda j: j.id):
        rows.append(
            (
                str(job.id),
                str(job.release),
                str(job.size),
                str(trace.completions[job.id]),
                str(summary.flows[job.id]),
            )
        )
    widths = [max(len(r[c]) for r in rows) for c in range(5)]
    for row in rows:
        print("  ".join(val.rjust(w) for val, w in zip(row, widths)))
    print("total flow: %s" % summary.total_flow)
    print(
        "k-th power flow: %s"
        % "  ".join("k=%d %s" % (k, summary.kth_power_flow[k]) for k in (1, 2, 3))
    )
    print(
        "flow norms: %s"
        % "  ".join("l%d=%s" % (k, summary.lk_norm[k]) for k in (1, 2, 3))
    )
    if args.out:
        _write_text(args.out, dump_json(trace_to_json(trace)))
        print("trace written to %s" % args.out)
    return EXIT_OK


# --------------------------------------------------------------------------
# gen

def cmd_gen(args) -> int:
    spec = GenSpec(
        family=args.family,
        n=args.n,
        machines=args.machines,
        size_range=args.size_range,
        release_range=args.release_range,
        seed=args.seed,
    )
    try:
        instance = generate(spec)
    except (WorkloadError, InstanceError) as exc:
        raise CliError(EXIT_INPUT, "cannot generate: %s" % exc)
    _write_text(args.out, serialize_instance(instance))
    return EXIT_OK


# --------------------------------------------------------------------------
# verify

def _corrupted(trace: ExecutionTrace) -> ExecutionTrace:
    # blank out the first busy machine slot so conservation fails
    segments = list(trace.segments)
    for idx, seg in enumerate(segments):
        slots = list(seg.assignment)
        for pos, jid in enumerate(slots):
            if jid is not None:
                slots[pos] = None
                segments[idx] = Segment(seg.start, seg.end, tuple(slots))
                return ExecutionTrace(
                    instance=trace.instance,
                    speed=trace.speed,
                    segments=tuple(segments),
                    completions=trace.completions,
                    events=trace.events,
                )
    return trace


def _merge_json(check, params, docs):
    witnesses = []
    worst = None
    verdict = "pass"
    n_events = 0
    for doc in docs:
        n_events += doc["n_events"]
        witnesses.extend(doc["witnesses"])
        if doc["verdict"] != "pass":
            verdict = "fail"
        ws = doc["worst_slack"]
        if ws is not None:
            wr = rat(ws)
            worst = wr if worst is None or wr < worst else worst
    return {
        "check": check,
        "params": {key: str(val) for key, val in params.items()},
        "n_events": n_events,
        "worst_slack": None if worst is None else str(worst),
        "verdict": verdict,
        "witnesses": witnesses,
    }


def _skipped_json(check, params, reason):
    doc = _merge_json(check, params, [])
    doc["verdict"] = "skipped"
    doc["witnesses"] = [{"label": reason, "time": None, "delta": "0", "bound": None}]
    return doc


def cmd_verify(args) -> int:
    instance = _read_instance(args.instance)
    speed = _speed_config(args.speed)
    ks = _k_list(args.k)
    refs = _ref_list(args.refs)
    eps = speed.epsilon

    if eps <= 0:
        raise CliError(
            EXIT_DOMAIN, "epsilon out of theorem range: verification needs speed > 1"
        )
    power_ks = list(ks)
    skip_notice = None
    if eps > HALF:
        if any(k > 1 for k in ks):
            raise CliError(
                EXIT_DOMAIN,
                "epsilon out of theorem range (k > 1 needs 0 < epsilon <= 1/2)",
            )
        power_ks = []
        skip_notice = (
            "epsilon > 1/2: power-flow-potential and completion-charge checks skipped"
        )

    trace = simulate_srpt(instance, speed)
    if args.inject_corruption:
        trace = _corrupted(trace)

    ok, violations = validate_trace(trace)
    table = []  # (check, reference, k-label, verdict, worst-slack)
    exports = []
    base_params = {"instance": args.instance, "speed": speed.speed, "eps": eps}

    feas = {
        "check": "trace-feasibility",
        "params": {key: str(val) for key, val in base_params.items()},
        "n_events": len(trace.segments),
        "worst_slack": None,
        "verdict": "pass" if ok else "fail",
        "witnesses": [
            {"label": v, "time": None, "delta": "0", "bound": None} for v in violations
        ],
    }
    exports.append(("trace-feasibility", "-", "-", feas))
    table.append(("trace-feasibility", "-", "-", feas["verdict"], "-"))

    if not ok:
        _emit_verify(args, table, exports, skip_notice)
        for v in violations[:5]:
            print("witness: %s" % v)
        return EXIT_VERIFY

    # reference traces; the oracle one depends on the objective power
    oracle_ks = sorted({1, *power_ks})
    ref_traces = {}  # (name, k) -> trace | None ; None means skipped
    oracle_note = None
    for name in refs:
        if name == "unit-srpt":
            ref_traces[name] = simulate_srpt(instance, UNIT_SPEED)
        elif name == "fifo":
            ref_traces[name] = simulate_policy(instance, UNIT_SPEED, priority=fifo_priority)
        else:
            for k in oracle_ks:
                try:
                    ref_traces[("oracle", k)] = brute_force_opt(instance, k=k).trace
                except OracleError as exc:
                    ref_traces[("oracle", k)] = None
                    oracle_note = str(exc)

    for name in refs:
        def _ctx(k):
            ref_trace = ref_traces[("oracle", k) if name == "oracle" else name]
            if ref_trace is None:
                return None
            return make_context(trace, ref_trace, k=k)

        params = dict(base_params, reference=name)
        ctx1 = _ctx(1)

        if ctx1 is None:
            for check in ("backlog-bound", "flow-potential"):
                doc = _skipped_json(check, dict(params, k=1), "oracle skipped: %s" % oracle_note)
                exports.append((check, name, "1", doc))
                table.append((check, name, "-" if check == "backlog-bound" else "1", "skipped", "-"))
        else:
            doc = report_to_json(check_backlog_bound(ctx1), dict(params, k=1))
            exports.append(("backlog-bound", name, "1", doc))
            table.append(("backlog-bound", name, "-", doc["verdict"], doc["worst_slack"] or "-"))
            flow = check_flow_conditions(ctx1)
            docs = [report_to_json(rep, dict(params, k=1)) for rep in flow.reports]
            merged = _merge_json("flow-potential", dict(params, k=1), docs)
            exports.append(("flow-potential", name, "1", merged))
            table.append(("flow-potential", name, "1", merged["verdict"], merged["worst_slack"] or "-"))

        for check in ("power-flow-potential", "completion-charge"):
            klabel = ",".join(str(k) for k in power_ks) if power_ks else "-"
            if not power_ks:
                doc = _skipped_json(check, dict(params, k="-"), skip_notice)
                exports.append((check, name, "-", doc))
                table.append((check, name, "-", "skipped", "-"))
                continue
            per_k = []
            skipped_reason = None
            for k in power_ks:
                ctx = _ctx(k)
                if ctx is None:
                    skipped_reason = "oracle skipped: %s" % oracle_note
                    break
                if check == "power-flow-potential":
                    reports = check_power_flow_conditions(ctx, k=k).reports
                else:
                    reports = (check_completion_charge(ctx, k=k),)
                docs = [report_to_json(rep, dict(params, k=k)) for rep in reports]
                merged_k = _merge_json(check, dict(params, k=k), docs)
                exports.append((check, name, str(k), merged_k))
                per_k.append(merged_k)
            if skipped_reason is not None:
                doc = _skipped_json(check, dict(params, k=klabel), skipped_reason)
                exports.append((check, name, klabel, doc))
                table.append((check, name, klabel, "skipped", "-"))
                continue
            merged = _merge_json(check, dict(params, k=klabel), per_k)
            table.append((check, name, klabel, merged["verdict"], merged["worst_slack"] or "-"))

    any_fail = any(row[3] == "fail" for row in table)
    _emit_verify(args, table, exports, skip_notice)
    if any_fail:
        shown = 0
        for _, _, _, doc in exports:
            if doc["verdict"] != "fail":
                continue
            for wit in doc["witnesses"]:
                print(
                    "witness [%s]: %s (delta %s vs bound %s at t=%s)"
                    % (doc["check"], wit["label"], wit["delta"], wit["bound"], wit["time"])
                )
                shown += 1
                if shown >= 10:
                    break
            if shown >= 10:
                break
        return EXIT_VERIFY
    return EXIT_OK


def _emit_verify(args, table, exports, skip_notice):
    rows = [("check", "reference", "k", "verdict", "worst-slack")]
    rows.extend((c, r, k, v, w if w is not None else "-") for c, r, k, v, w in table)
    widths = [max(len(row[col]) for row in rows) for col in range(5)]
    for row in rows:
        print("  ".join(val.ljust(wid) for val, wid in zip(row, widths)).rstrip())
    if skip_notice:
        print("note: %s" % skip_notice)
    if not args.out:
        return
    if args.format == "csv":
        buf = []
        buf.append("instance,check,eps,k,reference,n_events,worst_slack,verdict")
        for check, ref, klabel, doc in exports:
            buf.append(
                ",".join(
                    [
                        args.instance,
                        check,
                        doc["params"].get("eps", ""),
                        klabel,
                        ref,
                        str(doc["n_events"]),
                        doc["worst_slack"] if doc["worst_slack"] is not None else "",
                        doc["verdict"],
                    ]
                )
            )
        _write_text(args.out, "\n".join(buf) + "\n")
    else:
        doc = {
            "instance": args.instance,
            "speed": str(rat(args.speed)),
            "checks": [d for (_, _, _, d) in exports],
            "verdict": "fail" if any(r[3] == "fail" for r in table) else "pass",
        }
        _write_text(args.out, dump_json(doc))
    print("report written to %s" % args.out)


# --------------------------------------------------------------------------
# sweep

def _theorem_bound(eps: Rational, k: int) -> Rational:
    if k == 1:
        return 4 / eps
    return (2 / (eps * (1 - eps))) ** k + ((1 + eps) / eps ** 2) ** k


def _load_manifest(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise CliError(EXIT_INPUT, "cannot read manifest: %s" % exc)
    except json.JSONDecodeError as exc:
        raise CliError(EXIT_INPUT, "bad manifest JSON: %s" % exc)
    if not isinstance(doc, dict):
        raise CliError(EXIT_INPUT, "manifest must be a JSON object")

    out = {}
    fams = doc.get("families")
    if not isinstance(fams, list) or not all(isinstance(f, dict) for f in fams):
        raise CliError(EXIT_INPUT, "manifest: families must be a list of objects")
    for fam in fams:
        missing = {"family", "n", "size_range", "release_range"} - set(fam)
        if missing:
            raise CliError(
                EXIT_INPUT, "manifest: family entry missing %s" % ", ".join(sorted(missing))
            )
        if fam["family"] not in FAMILIES:
            raise CliError(EXIT_INPUT, "manifest: unknown family %r" % fam["family"])
    out["families"] = fams

    seeds = doc.get("seeds", 1)
    if isinstance(seeds, int):
        if seeds < 0:
            raise CliError(EXIT_INPUT, "manifest: seeds count must be >= 0")
        out["seeds"] = list(range(seeds))
    elif isinstance(seeds, list) and all(isinstance(s, int) for s in seeds):
        out["seeds"] = seeds
    else:
        raise CliError(EXIT_INPUT, "manifest: seeds must be a count or a list of integers")

    machines = doc.get("machines", [1])
    if not (isinstance(machines, list) and machines and all(isinstance(m, int) and m >= 1 for m in machines)):
        raise CliError(EXIT_INPUT, "manifest: machines must be a non-empty list of integers >= 1")
    out["machines"] = machines

    mode = doc.get("bound", "theorem")
    if mode not in ("theorem", "one-competitive"):
        raise CliError(EXIT_INPUT, "manifest: bound must be 'theorem' or 'one-competitive'")
    out["mode"] = mode

    ks = doc.get("k", [1])
    if not (isinstance(ks, list) and ks and all(isinstance(k, int) and k >= 1 for k in ks)):
        raise CliError(EXIT_INPUT, "manifest: k must be a non-empty list of integers >= 1")
    ks = sorted(set(ks))

    if mode == "one-competitive":
        if "eps" in doc:
            raise CliError(EXIT_INPUT, "manifest: eps grid is implied by one-competitive mode")
        if ks != [1]:
            raise CliError(EXIT_INPUT, "manifest: one-competitive mode checks k = 1 only")
        out["eps"] = [None]
    else:
        eps_list = doc.get("eps")
        if not (isinstance(eps_list, list) and eps_list):
            raise CliError(EXIT_INPUT, "manifest: eps must be a non-empty list of rational strings")
        parsed = []
        for text in eps_list:
            try:
                val = rat(str(text))
            except RationalParseError as exc:
                raise CliError(EXIT_INPUT, "manifest: bad eps %r: %s" % (text, exc))
            if val <= 0:
                raise CliError(EXIT_DOMAIN, "epsilon out of theorem range: eps %s <= 0" % val)
            if val > HALF and any(k > 1 for k in ks):
                raise CliError(
                    EXIT_DOMAIN,
                    "epsilon out of theorem range (k > 1 needs eps <= 1/2, got %s)" % val,
                )
            parsed.append(str(val))
        out["eps"] = parsed
    out["k"] = ks
    return out


def _sweep_cell(payload):
    fam, seed, m, eps_str, ks, mode = payload
    rows, notices = [], []
    spec = GenSpec(
        family=fam["family"],
        n=fam["n"],
        machines=m,
        size_range=tuple(fam["size_range"]),
        release_range=tuple(fam["release_range"]),
        seed=seed,
    )
    instance = generate(spec)
    m_used = instance.machines  # starvation-stream pins itself to one machine
    if mode == "one-competitive":
        speed_val = 2 - Rational(1, m_used)
        eps = speed_val - 1
    else:
        eps = rat(eps_str)
        speed_val = 1 + eps
    trace = simulate_srpt(instance, SpeedConfig.from_speed(speed_val))
    flows = [trace.completions[j.id] - j.release for j in instance.jobs]
    for k in ks:
        try:
            opt = brute_force_opt(instance, k=k)
        except OracleError as exc:
            notices.append(
                "cell family=%s seed=%d m=%d k=%d skipped: %s"
                % (fam["family"], seed, m_used, k, exc)
            )
            continue
        srpt_obj = sum((f ** k for f in flows), ZERO)
        bound_rat = ONE if mode == "one-competitive" else _theorem_bound(eps, k)
        within = srpt_obj <= bound_rat * opt.objective
        if opt.objective != 0:
            ratio = srpt_obj / opt.objective
        else:
            ratio = ONE  # both objectives vanish only on the empty instance
        rows.append(
            {
                "family": fam["family"],
                "seed": str(seed),
                "m": str(m_used),
                "eps": str(eps),
                "k": str(k),
                "srpt_obj": str(srpt_obj),
                "oracle_obj": str(opt.objective),
                "ratio": decimal_str(ratio),
                "bound": decimal_str(bound_rat),
                "within_bound": "true" if within else "false",
                "_sort": (
                    fam["family"],
                    seed,
                    m_used,
                    (int(eps.numerator), int(eps.denominator)),
                    k,
                ),
                "_ratio": (int(ratio.numerator), int(ratio.denominator)),
                "_within": within,
            }
        )
    return rows, notices


CSV_COLUMNS = (
    "family",
    "seed",
    "m",
    "eps",
    "k",
    "srpt_obj",
    "oracle_obj",
    "ratio",
    "bound",
    "within_bound",
)


def _worker_count(n_cells: int) -> int:
    env = os.environ.get("SRPTLAB_THREADS", "")
    if env:
        try:
            cap = int(env)
        except ValueError:
            raise CliError(EXIT_INPUT, "SRPTLAB_THREADS must be an integer, got %r" % env)
        if cap < 1:
            raise CliError(EXIT_INPUT, "SRPTLAB_THREADS must be >= 1")
    else:
        cap = min(8, os.cpu_count() or 1)
    return max(1, min(cap, n_cells or 1))


def cmd_sweep(args) -> int:
    manifest = _load_manifest(args.manifest)
    payloads = [
        (fam, seed, m, eps_str, manifest["k"], manifest["mode"])
        for fam in manifest["families"]
        for seed in manifest["seeds"]
        for m in manifest["machines"]
        for eps_str in manifest["eps"]
    ]
    workers = _worker_count(len(payloads))
    if workers > 1 and len(payloads) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_sweep_cell, payloads, chunksize=4))
    else:
        results = [_sweep_cell(p) for p in payloads]

    rows = []
    notices = []
    for cell_rows, cell_notices in results:
        rows.extend(cell_rows)
        notices.extend(cell_notices)
    rows.sort(key=lambda r: r["_sort"])

    max_ratio = None
    all_within = True
    for row in rows:
        num, den = row["_ratio"]
        val = Rational(num, den)
        if max_ratio is None or val > max_ratio:
            max_ratio = val
        all_within = all_within and row["_within"]

    if args.format == "json":
        doc = {
            "rows": [{c: row[c] for c in CSV_COLUMNS} for row in rows],
            "max_ratio": None if max_ratio is None else decimal_str(max_ratio),
            "all_within_bound": all_within,
        }
        _write_text(args.out, dump_json(doc))
    else:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for row in rows:
            writer.writerow([row[c] for c in CSV_COLUMNS])
        _write_text(args.out, buf.getvalue())

    for note in notices:
        print(note, file=sys.stderr)
    print(
        "sweep: %d rows, %d cells skipped, max ratio %s, all within bound: %s"
        % (
            len(rows),
            len(notices),
            "-" if max_ratio is None else decimal_str(max_ratio),
            "yes" if all_within else "NO",
        ),
        file=sys.stderr,
    )
    return EXIT_OK if all_within else EXIT_VERIFY


# --------------------------------------------------------------------------
# parser wiring

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="srptlab",
        description="Exact SRPT scheduling simulator and analysis verifier.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="run SRPT on an instance and print objectives")
    p_sim.add_argument("--instance", required=True, help="instance file path, or - for stdin")
    p_sim.add_argument("--speed", default="1", help="machine speed as a rational, e.g. 3/2")
    p_sim.add_argument("--out", help="write the execution trace as JSON to this path")
    p_sim.set_defaults(func=cmd_simulate)

    p_ver = sub.add_parser("verify", help="run the analysis checks against references")
    p_ver.add_argument("--instance", required=True, help="instance file path, or - for stdin")
    p_ver.add_argument("--speed", required=True, help="speed 1+eps as a rational > 1")
    p_ver.add_argument("--k", default="1", help="comma-separated objective powers, default 1")
    p_ver.add_argument(
        "--refs",
        default="oracle,unit-srpt,fifo",
        help="comma-separated references: oracle, unit-srpt, fifo",
    )
    p_ver.add_argument("--format", choices=("csv", "json"), default="json")
    p_ver.add_argument("--out", help="write the machine-readable report to this path")
    p_ver.add_argument("--inject-corruption", action="store_true", help=argparse.SUPPRESS)
    p_ver.set_defaults(func=cmd_verify)

    p_sweep = sub.add_parser("sweep", help="run a manifest of cells and emit ratio rows")
    p_sweep.add_argument("--manifest", required=True, help="JSON manifest path")
    p_sweep.add_argument("--format", choices=("csv", "json"), default="csv")
    p_sweep.add_argument("--out", help="output path, default stdout")
    p_sweep.set_defaults(func=cmd_sweep)

    p_gen = sub.add_parser("gen", help="generate an instance file")
    p_gen.add_argument("--family", required=True, choices=FAMILIES)
    p_gen.add_argument("--n", required=True, type=int)
    p_gen.add_argument("--machines", type=int, default=1)
    p_gen.add_argument("--size-range", type=_parse_span, default=(1, 4), metavar="LO:HI")
    p_gen.add_argument("--release-range", type=_parse_span, default=(0, 8), metavar="LO:HI")
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--out", help="output path, default stdout")
    p_gen.set_defaults(func=cmd_gen)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return exc.code
    except AnalysisError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_DOMAIN
    except BrokenPipeError:
        return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
