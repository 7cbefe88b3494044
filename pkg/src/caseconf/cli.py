"""Command-line interface.

Exit codes: 0 on success, 1 on a domain error (bad case, failed session,
unknown node), 2 on usage errors. ``--format json`` switches any subcommand
to canonical machine output; human output rounds confidences to two decimal
places, machine output keeps full precision.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import Optional, Sequence

from .confidence import (
    PRODUCT,
    SUM_OF_DOUBTS,
    propagate,
    report_round,
    uniform_required_confidence,
    whatif,
)
from .defeaters import PrioritisationWeights, checklist, prioritise
from .document import canonical_json, load_case
from .errors import CaseConfError
from .lint import structural_lint
from .model import ArgumentGraph
from .report import SummaryAxes, sentencing_statement, visual_summary
from .soundness import validity_report
from .delphi import (
    DelphiConfig,
    RemoteBackend,
    ScriptedBackend,
    SimulatedBackend,
    assign_roles,
    estimate_defeater_probability,
    run_benchmark,
    run_session,
)

_METHOD_ALIASES = {
    "sod": SUM_OF_DOUBTS,
    "sum_of_doubts": SUM_OF_DOUBTS,
    "product": PRODUCT,
}


def _method(value: str) -> str:
    try:
        return _METHOD_ALIASES[value]
    except KeyError:
        raise argparse.ArgumentTypeError(
            f"unknown method {value!r} (choose sod or product)"
        ) from None


def _weights(value: str) -> PrioritisationWeights:
    parts = value.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("weights take the form wp,wi,we")
    try:
        wp, wi, we = (float(p) for p in parts)
    except ValueError:
        raise argparse.ArgumentTypeError("weights must be numbers") from None
    return PrioritisationWeights(w_probability=wp, w_impact=wi, w_effort=we)


def _axes(value: str) -> tuple[int, int, int]:
    parts = value.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("axes take the form evidence,argumentation,agreement")
    try:
        return tuple(int(p) for p in parts)  # type: ignore[return-value]
    except ValueError:
        raise argparse.ArgumentTypeError("axes must be integers 1..5") from None


def _override(value: str) -> tuple[str, float]:
    node, sep, raw = value.partition("=")
    if not sep or not node:
        raise argparse.ArgumentTypeError("overrides take the form node=value")
    try:
        return node, float(raw)
    except ValueError:
        raise argparse.ArgumentTypeError(f"override value {raw!r} is not a number") from None


def _emit(args, payload: dict, human: str) -> None:
    if args.format == "json":
        print(canonical_json(payload))
    else:
        print(human, end="" if human.endswith("\n") else "\n")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="caseconf",
        description="Build, validate and quantify confidence in CAE assurance cases.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_format(p):
        p.add_argument("--format", choices=("text", "json"), default="text")

    p = sub.add_parser("validate", help="build a case document and lint it")
    p.add_argument("case")
    add_format(p)

    p = sub.add_parser("soundness", help="logical validity of every node")
    p.add_argument("case")
    add_format(p)

    p = sub.add_parser("propagate", help="propagate confidence up the case")
    p.add_argument("case")
    p.add_argument("--method", type=_method, required=True)
    p.add_argument("--allow-missing-warrant", action="store_true")
    add_format(p)

    p = sub.add_parser(
        "required-confidence",
        help="uniform per-assignment confidence needed for a target",
    )
    p.add_argument("--target", type=float, required=True)
    p.add_argument("--n", type=int, required=True, dest="n_assigned")
    p.add_argument("--method", type=_method, required=True)
    add_format(p)

    p = sub.add_parser("whatif", help="re-propagate with overridden assignments")
    p.add_argument("case")
    p.add_argument("--set", type=_override, action="append", default=[], dest="overrides")
    p.add_argument("--method", type=_method, required=True)
    p.add_argument("--allow-missing-warrant", action="store_true")
    add_format(p)

    p = sub.add_parser("defeaters", help="defeater analytics")
    dsub = p.add_subparsers(dest="defeaters_command", required=True)
    dp = dsub.add_parser("prioritise", help="stage and rank unresolved defeaters")
    dp.add_argument("case")
    dp.add_argument("--weights", type=_weights, default=PrioritisationWeights())
    dp.add_argument("--method", type=_method, default=PRODUCT)
    add_format(dp)
    dc = dsub.add_parser("checklist", help="bundled defeater checklist")
    dc.add_argument("--category")
    add_format(dc)

    p = sub.add_parser("delphi", help="expert elicitation")
    dsub = p.add_subparsers(dest="delphi_command", required=True)
    dr = dsub.add_parser("run", help="run sessions for one scenario")
    dr.add_argument("--scenario", required=True, help="JSON file with a 'description'")
    dr.add_argument("--backend", choices=("scripted", "simulated", "remote"), required=True)
    dr.add_argument("--runs", type=int, default=None)
    dr.add_argument("--seed", type=int, default=0)
    dr.add_argument("--panel-size", type=int, default=50)
    dr.add_argument("--center", type=float, default=None)
    dr.add_argument("--noise", type=float, default=None)
    dr.add_argument("--script", help="JSON schedule file for the scripted backend")
    dr.add_argument("--endpoint", help="URL for the remote backend")
    dr.add_argument("--workers", type=int, default=1,
                    help="concurrent expert submissions per round")
    add_format(dr)
    db = dsub.add_parser("bench", help="benchmark against recorded scenarios")
    db.add_argument("--scenarios", required=True)
    db.add_argument("--backend", choices=("scripted", "simulated"), required=True)
    db.add_argument("--seed", type=int, default=0)
    db.add_argument("--panel-size", type=int, default=50)
    db.add_argument("--center", type=float, default=None)
    db.add_argument("--noise", type=float, default=None)
    db.add_argument("--script", help="JSON schedule file for the scripted backend")
    db.add_argument("--workers", type=int, default=1,
                    help="concurrent expert submissions per round")
    add_format(db)

    p = sub.add_parser("report", help="decision-maker outputs")
    rsub = p.add_subparsers(dest="report_command", required=True)
    rs = rsub.add_parser("summary", help="multi-factor visual summary (SVG)")
    rs.add_argument("case")
    rs.add_argument("--axes", type=_axes, default=(3, 3, 3),
                    help="evidence,argumentation,agreement ordinals (1-5)")
    rs.add_argument("--method", type=_method, default=PRODUCT)
    rs.add_argument("--out", help="write the SVG here instead of stdout")
    add_format(rs)
    rt = rsub.add_parser("sentence", help="evaluator's sentencing statement")
    rt.add_argument("case")
    rt.add_argument("--judgements", help="JSON file mapping clause keys to text")
    rt.add_argument("--method", type=_method, default=PRODUCT)
    add_format(rt)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--port", type=int,
                   default=int(os.environ.get("CASECONF_PORT", "8000")))
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--cases-dir", help="directory of case documents to load")
    p.add_argument("--ui-dir", help="static UI assets served under /ui")

    return parser


def _load(args) -> ArgumentGraph:
    return load_case(args.case)


def _cmd_validate(args) -> int:
    graph = _load(args)
    findings = structural_lint(graph)
    payload = {
        "case": graph.case_id,
        "ok": True,
        "findings": [f.__dict__ for f in findings],
    }
    lines = [f"{graph.case_id}: well-formed ({len(findings)} finding(s))"]
    lines += [f"  [{f.severity}] {f.node}: {f.message}" for f in findings]
    _emit(args, payload, "\n".join(lines))
    return 0


def _cmd_soundness(args) -> int:
    graph = _load(args)
    rows = validity_report(graph)
    payload = {"case": graph.case_id, "validity": rows}
    width = max(len(r["node"]) for r in rows)
    lines = [
        f"{r['node']:<{width}}  {r['state']:<11}  {','.join(r['causes']) or '-'}"
        for r in rows
    ]
    _emit(args, payload, "\n".join(lines))
    return 0


def _cmd_propagate(args) -> int:
    graph = _load(args)
    valuation = propagate(
        graph, graph.assignments, args.method,
        allow_missing_warrant=args.allow_missing_warrant,
    )
    lines = []
    for node in sorted(valuation.per_node):
        flagged = f"  ({', '.join(valuation.flags[node])})" if node in valuation.flags else ""
        lines.append(f"{node}: {report_round(valuation.per_node[node]):.2f}{flagged}")
    lines.append(
        f"top {graph.top_claim}: {report_round(valuation.top_value(graph)):.2f} "
        f"[{valuation.method}]"
    )
    _emit(args, valuation.to_dict(), "\n".join(lines))
    return 0


def _cmd_required_confidence(args) -> int:
    value = uniform_required_confidence(args.target, args.n_assigned, args.method)
    payload = {
        "target": args.target,
        "n_assigned": args.n_assigned,
        "method": args.method,
        "required": value,
    }
    _emit(args, payload, f"{value:.5f}")
    return 0


def _cmd_whatif(args) -> int:
    graph = _load(args)
    overrides = dict(args.overrides)
    valuation, delta = whatif(
        graph, graph.assignments, args.method, overrides,
        allow_missing_warrant=args.allow_missing_warrant,
    )
    top = valuation.top_value(graph)
    payload = {
        "case": graph.case_id,
        "method": args.method,
        "overrides": overrides,
        "top": report_round(top),
        "delta": delta,
        "top_raw": top,
        "valuation": valuation.to_dict(),
    }
    _emit(args, payload, f"top {graph.top_claim}: {report_round(top):.2f} (delta {delta:+.2f})")
    return 0


def _cmd_defeaters(args) -> int:
    if args.defeaters_command == "checklist":
        items = checklist(args.category)
        payload = {"items": [item.to_dict() for item in items]}
        lines = [f"[{item.category}] {item.name}: {item.prompt}" for item in items]
        _emit(args, payload, "\n".join(lines) if lines else "no items")
        return 0
    graph = _load(args)
    plan = prioritise(graph, graph.assignments, args.method, args.weights)
    lines = [plan.assumptions]
    if plan.stage1:
        lines.append("stage 1 (reasoning steps): " + ", ".join(plan.stage1))
    if plan.stage2:
        lines.append("stage 2 (restructuring): " + ", ".join(plan.stage2))
    for entry in plan.stage3:
        lines.append(
            f"stage 3: {entry.id}  score={entry.score:.2f}  "
            f"(p={entry.probability}, impact={entry.impact}, effort={entry.effort})"
        )
    for item in plan.unscoreable:
        lines.append(f"unscoreable: {item['id']} ({item['reason']})")
    _emit(args, plan.to_dict(), "\n".join(lines))
    return 0


def _delphi_backend(args):
    if args.backend == "simulated":
        if args.center is None:
            raise CaseConfError("simulated backend needs --center (and usually --noise)")
        return SimulatedBackend(center=args.center, noise=args.noise or 0.0)
    if args.backend == "scripted":
        if not args.script:
            raise CaseConfError("scripted backend needs --script FILE")
        return ScriptedBackend(json.loads(Path(args.script).read_text(encoding="utf-8")))
    endpoint = args.endpoint or os.environ.get("CASECONF_DELPHI_ENDPOINT")
    if not endpoint:
        raise CaseConfError(
            "remote backend needs --endpoint URL (or CASECONF_DELPHI_ENDPOINT)"
        )
    return RemoteBackend(endpoint=endpoint)


def _cmd_delphi(args) -> int:
    panel = assign_roles(args.panel_size)
    config = DelphiConfig(seed=args.seed)
    backend = _delphi_backend(args)
    if args.delphi_command == "bench":
        report = run_benchmark(args.scenarios, panel, config, backend,
                               max_workers=args.workers)
        lines = [f"{s.id}: estimate={s.estimate:.2f} reference={s.reference_estimate:.2f} "
                 f"outcome={s.outcome}" for s in report.per_scenario]
        lines.append(
            f"calibration ({report.metric}): ours={report.calibration_ours} "
            f"reference={report.calibration_reference}"
        )
        _emit(args, report.to_dict(), "\n".join(lines))
        return 0
    scenario_doc = json.loads(Path(args.scenario).read_text(encoding="utf-8"))
    if not isinstance(scenario_doc, dict) or "description" not in scenario_doc:
        raise CaseConfError("scenario file must be a JSON object with a 'description'")
    scenario = scenario_doc["description"]
    if args.runs is not None:
        estimate = estimate_defeater_probability(
            scenario, panel, config, backend, runs=args.runs,
            max_workers=args.workers,
        )
        _emit(args, estimate.to_dict(), estimate.formatted())
        return 0
    session = run_session(scenario, panel, config, backend,
                          max_workers=args.workers)
    human = (
        f"final estimate {session.final_estimate:.4f} "
        f"(95% credible interval {session.credible_interval[0]:.4f}"
        f"..{session.credible_interval[1]:.4f}), "
        f"rounds: {len(session.rounds)}, consensus at: {session.consensus_reached_at}"
    )
    _emit(args, session.to_dict(), human)
    return 0


def _cmd_report(args) -> int:
    graph = _load(args)
    valuation = propagate(graph, graph.assignments, args.method)
    if args.report_command == "summary":
        eq, aq, sa = args.axes
        axes = SummaryAxes.from_valuation(graph, valuation, eq, aq, sa)
        svg, record = visual_summary(graph, valuation, axes)
        if args.out:
            Path(args.out).write_text(svg, encoding="utf-8")
            _emit(args, record, f"wrote {args.out}")
        elif args.format == "json":
            _emit(args, record, "")
        else:
            print(svg, end="")
        return 0
    judgements = {}
    if args.judgements:
        judgements = json.loads(Path(args.judgements).read_text(encoding="utf-8"))
    statement = sentencing_statement(graph, valuation, judgements)
    _emit(args, {"statement": statement}, statement)
    return 0


def run_cli(argv: Optional[Sequence[str]] = None) -> int:
    """Parse arguments and dispatch; returns the process exit code."""
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "validate": _cmd_validate,
        "soundness": _cmd_soundness,
        "propagate": _cmd_propagate,
        "required-confidence": _cmd_required_confidence,
        "whatif": _cmd_whatif,
        "defeaters": _cmd_defeaters,
        "delphi": _cmd_delphi,
        "report": _cmd_report,
    }
    if args.command == "serve":
        from .service import serve

        serve(port=args.port, cases_dir=args.cases_dir, ui_dir=args.ui_dir, host=args.host)
        return 0
    try:
        return handlers[args.command](args)
    except CaseConfError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except json.JSONDecodeError as exc:
        print(f"error: invalid JSON input: {exc}", file=sys.stderr)
        return 1


def main() -> None:  # console entry point
    sys.exit(run_cli())
