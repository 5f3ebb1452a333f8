"""Command-line interface: plan, validate, induce, scenario, serve.

Exit codes: 0 success, 1 failed validation or scenario, 2 no plan found,
64 usage errors, 65 unparseable input files.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .induction import Demonstration, EmptyDelta, induce
from .pddl import PddlError, emit_action, parse_domain, parse_problem
from .planner import (
    BudgetExceeded,
    NoPlanFound,
    Plan,
    PlanningProblem,
    SearchConfig,
    plan,
    validate_plan,
)

EX_OK = 0
EX_FAILED = 1
EX_NO_PLAN = 2
EX_USAGE = 64
EX_DATAERR = 65


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="teachplan")
    sub = parser.add_subparsers(dest="command", required=True)

    p_plan = sub.add_parser("plan", help="search for a plan and print one step per line")
    p_plan.add_argument("-d", "--domain", required=True)
    p_plan.add_argument("-p", "--problem", required=True)
    p_plan.add_argument("--optimal", action="store_true", help="breadth-first optimal search")
    p_plan.add_argument("--max-expansions", type=int, default=100_000)

    p_val = sub.add_parser("validate", help="replay a plan file against a problem")
    p_val.add_argument("-d", "--domain", required=True)
    p_val.add_argument("-p", "--problem", required=True)
    p_val.add_argument("--plan", required=True, help="JSON list of {action, args}")

    p_ind = sub.add_parser("induce", help="induce an operator from a demonstration file")
    p_ind.add_argument("--demo", required=True, help="demonstration JSON file")
    p_ind.add_argument("--mode", choices=("minimal", "full-delta"), default="minimal")
    p_ind.add_argument(
        "--static", action="append", default=None,
        help="static predicate name (repeatable; default: color)",
    )

    p_scn = sub.add_parser("scenario", help="replay the four-stage teaching protocol")
    p_scn.add_argument("--run", required=True, choices=("1", "2", "3", "4", "all"))
    p_scn.add_argument("--store", default=None, help="persist the session log to this directory")

    p_srv = sub.add_parser("serve", help="start the HTTP service")
    p_srv.add_argument("--port", type=int, default=8765)
    p_srv.add_argument("--host", default="127.0.0.1")
    p_srv.add_argument(
        "--store", default=os.environ.get("TEACHPLAN_STORE"),
        help="session store directory (default: $TEACHPLAN_STORE)",
    )

    return parser


def _load_problem(domain_path: str, problem_path: str) -> PlanningProblem:
    domain = parse_domain(Path(domain_path).read_text(encoding="utf-8"))
    problem = parse_problem(Path(problem_path).read_text(encoding="utf-8"), domain)
    return PlanningProblem.from_defs(domain, problem)


def _cmd_plan(args: argparse.Namespace) -> int:
    problem = _load_problem(args.domain, args.problem)
    config = SearchConfig(
        strategy="bfs_optimal" if args.optimal else "astar_goalcount",
        max_expansions=args.max_expansions,
    )
    try:
        result = plan(problem, config)
    except (NoPlanFound, BudgetExceeded) as exc:
        print(f"no plan: {exc}", file=sys.stderr)
        return EX_NO_PLAN
    for step in result.steps:
        print(step)
    return EX_OK


def _cmd_validate(args: argparse.Namespace) -> int:
    problem = _load_problem(args.domain, args.problem)
    try:
        data = json.loads(Path(args.plan).read_text(encoding="utf-8"))
        candidate = Plan.from_json(data)
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        print(f"bad plan file: {exc}", file=sys.stderr)
        return EX_DATAERR
    report = validate_plan(problem, candidate)
    if report.ok:
        print(f"valid plan, {candidate.cost} steps, goal satisfied")
        return EX_OK
    if not report.valid:
        print(
            f"invalid at step {report.failed_index}: {report.failed_action}"
            + (f" — unsatisfied: {', '.join(str(l) for l in report.unsatisfied)}"
               if report.unsatisfied else f" — {report.message}"),
            file=sys.stderr,
        )
    else:
        print("plan applies but the goal does not hold in the final state", file=sys.stderr)
    return EX_FAILED


def _cmd_induce(args: argparse.Namespace) -> int:
    try:
        data = json.loads(Path(args.demo).read_text(encoding="utf-8"))
        demo = Demonstration.from_json(data)
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        print(f"bad demonstration file: {exc}", file=sys.stderr)
        return EX_DATAERR
    statics = tuple(args.static) if args.static else ("color",)
    try:
        operator = induce(demo, args.mode.replace("-", "_"), statics)
    except EmptyDelta as exc:
        print(f"nothing to induce: {exc}", file=sys.stderr)
        return EX_FAILED
    print(emit_action(operator))
    return EX_OK


def _cmd_scenario(args: argparse.Namespace) -> int:
    from .scenarios import run_suite
    from .store import SessionStore

    upto = 4 if args.run == "all" else int(args.run)
    store = SessionStore(args.store) if args.store else None
    _, results, elapsed = run_suite(upto, store)
    for result in results:
        print(result.line)
    print(f"suite finished in {elapsed:.3f}s")
    return EX_OK if all(r.passed for r in results) and len(results) == upto else EX_FAILED


def _cmd_serve(args: argparse.Namespace) -> int:
    from .service import serve

    if not args.store:
        print("serve needs --store or $TEACHPLAN_STORE", file=sys.stderr)
        return EX_USAGE
    serve(args.store, host=args.host, port=args.port)
    return EX_OK


_COMMANDS = {
    "plan": _cmd_plan,
    "validate": _cmd_validate,
    "induce": _cmd_induce,
    "scenario": _cmd_scenario,
    "serve": _cmd_serve,
}


def cli_run(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EX_OK if exc.code == 0 else EX_USAGE
    try:
        return _COMMANDS[args.command](args)
    except PddlError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EX_DATAERR
    except FileNotFoundError as exc:
        print(f"missing file: {exc}", file=sys.stderr)
        return EX_USAGE


def main() -> None:
    sys.exit(cli_run())


if __name__ == "__main__":
    main()
