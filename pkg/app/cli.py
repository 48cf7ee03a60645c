"""Command-line front end: ``python -m app <command> ...``.

Structured results go to stdout as JSON (formulas, reports) or CSV (curves);
logs go to stderr. Exit codes: 0 success, 1 usage or domain error, 2 when a
table verification fails.
"""
import argparse
import csv
import json
import logging
from pathlib import Path
import sys
from typing import TextIO

from pydantic import BaseModel

from app.errors import InvalidFormula, MpfError
from app.logging_config import configure_logging
from app.models.cost import SimulationTask
from app.models.formula import ConstructMethod, MpfFormula
from app.models.optimize import LpProblem
from app.models.rational import parse_rational
from app.services import (
    bench_service,
    construct_service,
    cost_service,
    optimize_service,
    table_service,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_VERIFICATION_FAILED = 2


class CliUsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on bad usage; 2 is reserved for failed verification here."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def _rational(text: str):
    try:
        return parse_rational(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _emit_json(payload, out: TextIO):
    json.dump(payload, out, indent=2)
    out.write("\n")


def _emit_csv(rows: list[BaseModel], out: TextIO, columns: list[str] | None = None):
    dumped = [row.model_dump(mode="json") for row in rows]
    fieldnames = columns or (list(dumped[0]) if dumped else [])
    writer = csv.DictWriter(out, fieldnames=fieldnames, extrasaction="ignore", lineterminator="\n")
    writer.writeheader()
    writer.writerows(dumped)


def _read_formula(path: str) -> MpfFormula:
    try:
        data = json.loads(Path(path).read_text())
    except OSError as exc:
        raise CliUsageError(f"cannot read formula file {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InvalidFormula(f"{path} is not valid JSON ({exc})") from exc
    if not isinstance(data, dict):
        raise InvalidFormula(f"{path} must hold a JSON object")
    return construct_service.load_formula(data)


def cmd_construct(args: argparse.Namespace, out: TextIO) -> int:
    response = construct_service.construct(args.order, args.method, args.base, args.scale_factor)
    _emit_json(response.model_dump(mode="json", by_alias=True, exclude_none=True), out)
    return EXIT_OK


def cmd_optimize(args: argparse.Namespace, out: TextIO) -> int:
    if args.objective == "product":
        solution = optimize_service.search_min_product(
            args.m, args.alpha, args.max_exponent, args.enumerate_supports
        )
    elif args.objective == "k1cap":
        solution = optimize_service.search_min_k1_capped(
            args.m, args.alpha, args.cap, args.max_exponent, args.enumerate_supports
        )
    else:
        problem = LpProblem(
            m=args.m,
            alpha=args.alpha,
            M=args.max_exponent or optimize_service.default_max_exponent(args.m),
        )
        solution = optimize_service.l1_min_lp(problem)
    _emit_json(solution.to_json_dict(), out)
    return EXIT_OK


def cmd_verify_tables(args: argparse.Namespace, out: TextIO) -> int:
    paths = args.fixtures or [table_service.fixture_path(alpha) for alpha in table_service.TABLE_NAMES.values()]
    try:
        reports = [table_service.verify_tables(path) for path in paths]
    except OSError as exc:
        raise CliUsageError(f"cannot read fixture {exc.filename}: {exc.strerror}") from exc
    passed = all(report.passed for report in reports)
    _emit_json({"passed": passed, "reports": [r.model_dump(mode="json") for r in reports]}, out)
    return EXIT_OK if passed else EXIT_VERIFICATION_FAILED


def cmd_cost(args: argparse.Namespace, out: TextIO) -> int:
    amplified = not args.unamplified
    if args.sweep:
        if not args.t_lambdas or not args.eps_list:
            raise CliUsageError("--sweep needs --t-lambdas and --eps-list")
        rows = cost_service.cost_sweep(args.t_lambdas, args.eps_list, amplified=amplified)
        _emit_csv(rows, out)
        return EXIT_OK

    if args.t_lambda is None or args.epsilon is None:
        raise CliUsageError("cost needs --t-lambda and --epsilon (or --sweep)")
    task = SimulationTask(t_lambda=args.t_lambda, epsilon=args.epsilon)
    if args.formula:
        formula = _read_formula(args.formula)
    else:
        formula = construct_service.rounded_mpf(cost_service.choose_order(task) // 2)
    report = cost_service.total_cost(task, formula, amplified=amplified, steps=args.steps)
    _emit_json(report.model_dump(mode="json"), out)
    return EXIT_OK


def cmd_bench(args: argparse.Namespace, out: TextIO) -> int:
    sweep = bench_service.benchmark_sweep(
        args.sites,
        args.time,
        args.eps_list,
        base_order=args.base,
        max_m=args.max_m,
        allow_large=args.allow_large,
        comparison_order=args.comparison_order or None,
    )
    if args.csv:
        with open(args.csv, "w", newline="") as handle:
            _emit_csv(sweep.points + sweep.comparison, handle)
        logger.info(f"Wrote {len(sweep.points) + len(sweep.comparison)} benchmark rows to {args.csv}")
    _emit_json(sweep.model_dump(mode="json"), out)
    return EXIT_OK


def cmd_fig1(args: argparse.Namespace, out: TextIO) -> int:
    _emit_csv(bench_service.figure1_data(args.max_m), out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="mpf", description="Well-conditioned multiproduct formulas.")
    commands = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = commands.add_parser("construct", help="Build a formula of a given order")
    p.add_argument("--order", type=int, required=True, help="Even order 2m")
    p.add_argument("--method", choices=[m.value for m in ConstructMethod], default="rounded")
    p.add_argument("--base", type=int, choices=[2, 4], default=2, help="Base product formula order")
    p.add_argument("--scale-factor", type=float, default=None, help="Rounded-exponent K = f·√8·m/π")
    p.set_defaults(handler=cmd_construct)

    p = commands.add_parser("optimize", help="Search for a well-conditioned integer formula")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--alpha", type=int, choices=[2, 4], default=2)
    p.add_argument("--objective", choices=["product", "k1cap", "lp"], default="product")
    p.add_argument("--cap", type=_rational, default=parse_rational("2"), help="‖a‖₁ cap for k1cap, e.g. 2 or 5/3")
    p.add_argument("--max-exponent", type=int, default=None, help="Largest candidate exponent M")
    p.add_argument("--enumerate-supports", action="store_true",
                   help="Also search every exponent subset (m <= MPF_EXHAUSTIVE_MAX_M)")
    p.set_defaults(handler=cmd_optimize)

    p = commands.add_parser("verify-tables", help="Exactly verify coefficient table fixtures")
    p.add_argument("--fixtures", action="append", default=None, metavar="PATH",
                   help="Fixture file (repeatable; defaults to both bundled tables)")
    p.set_defaults(handler=cmd_verify_tables)

    p = commands.add_parser("cost", help="Step count and query cost")
    p.add_argument("--t-lambda", type=float, default=None)
    p.add_argument("--epsilon", type=float, default=None)
    p.add_argument("--formula", default=None, metavar="FILE", help="Formula JSON (default: rounded, auto order)")
    p.add_argument("--steps", type=int, default=None, help="Override the step count r")
    p.add_argument("--unamplified", action="store_true", help="Skip oblivious amplitude amplification")
    p.add_argument("--sweep", action="store_true", help="Emit a CSV over --t-lambdas × --eps-list")
    p.add_argument("--t-lambdas", type=float, nargs="+", default=None)
    p.add_argument("--eps-list", type=float, nargs="+", default=None)
    p.set_defaults(handler=cmd_cost)

    p = commands.add_parser("bench", help="Heisenberg-chain benchmark sweep")
    p.add_argument("--sites", type=int, required=True)
    p.add_argument("--time", type=float, default=None, help="Evolution time (default: number of sites)")
    p.add_argument("--eps-list", type=float, nargs="+", required=True)
    p.add_argument("--base", type=int, choices=[2, 4], default=2)
    p.add_argument("--max-m", type=int, default=None, help="Largest table m to include")
    p.add_argument("--allow-large", action="store_true", help="Allow up to MPF_MAX_SITES sites")
    p.add_argument("--comparison-order", type=int, default=4, help="Suzuki comparison order (0 disables)")
    p.add_argument("--csv", default=None, metavar="PATH", help="Also write the points as CSV")
    p.set_defaults(handler=cmd_bench)

    p = commands.add_parser("fig1", help="Query count and condition number per order, as CSV")
    p.add_argument("--max-m", type=int, default=16)
    p.set_defaults(handler=cmd_fig1)

    return parser


def main(argv: list[str] | None = None, out: TextIO | None = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(stream="ext://sys.stderr")
    out = out or sys.stdout
    try:
        return args.handler(args, out)
    except (MpfError, CliUsageError) as exc:
        logger.error(f"{args.command} failed: {exc}")
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except ValueError as exc:
        # pydantic ValidationError on values argparse let through
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
