#!/usr/bin/python3

#  SPDX-FileCopyrightText: 2026 endslab contributors
#  SPDX-License-Identifier: GPL-3.0-or-later

import argparse
import json
import logging
import pathlib
import sys

from pydantic import ValidationError

from endslab.analysis import Analysis
from endslab.common import BallOverflowError, EndsLabError, SpecError
from endslab.config import ANALYSES, AnalysisRequest
from endslab.context import Context
from endslab.dsl import build_graph, format_spec, parse_spec
from endslab.graphs import ball_adjacency, ball_to_dot, build_ball
from endslab.report import render_table

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_PARSE = 2
EXIT_BUDGET = 3


def _analyses(text: str):
    names = [n.strip() for n in text.split(",") if n.strip()]
    unknown = [n for n in names if n not in ANALYSES]
    if unknown:
        raise argparse.ArgumentTypeError(f"unknown analyses {unknown}, choose from {', '.join(ANALYSES)}")
    return names


def _context(args) -> Context:
    if args.request:
        ctx = Context.from_file(args.request)
        overrides = {}
        if args.format:
            overrides["output"] = args.format
        if overrides:
            ctx = Context(ctx.request.model_copy(update=overrides), ctx.base_dir)
        return ctx
    if not args.spec:
        logger.error("either a group spec or --request is needed")
        sys.exit(EXIT_ERROR)
    fields = {"spec": args.spec, "output": args.format or "json"}
    for name, value in (("r_max", args.rmax), ("R_max", args.Rmax), ("analyses", args.analyses)):
        if value is not None:
            fields[name] = value
    if args.budget is not None:
        fields["budget"] = {"vertices": args.budget}
    return Context(AnalysisRequest(**fields), pathlib.Path.cwd())


def _analyze(args) -> int:
    """
    Run the requested analyses and print the report
    """
    ctx = _context(args)
    report = Analysis(ctx).run()
    if ctx.request.output == "table":
        sys.stdout.write(render_table(report))
    elif ctx.request.output == "dot":
        ball = build_ball(ctx.graph, min(ctx.request.R_max, args.radius), budget=ctx.request.budget.vertices)
        sys.stdout.write(ball_to_dot(ball, ctx.graph))
    else:
        sys.stdout.write(report.to_json())
    if not report.budget.complete:
        logger.error(f"vertex budget exceeded at radius {report.budget.overflow_radius}, report is incomplete")
        return EXIT_BUDGET
    return EXIT_OK


def _graph(args):
    return build_graph(parse_spec(args.spec), pathlib.Path.cwd())


def _export_dot(args) -> int:
    """
    Write the ball of the given radius as DOT
    """
    graph = _graph(args)
    sys.stdout.write(ball_to_dot(build_ball(graph, args.radius, budget=args.budget), graph))
    return EXIT_OK


def _export_ball(args) -> int:
    """
    Write the ball of the given radius as JSON adjacency
    """
    graph = _graph(args)
    ball = build_ball(graph, args.radius, budget=args.budget)
    sys.stdout.write(json.dumps(ball_adjacency(ball, graph), indent=2) + "\n")
    return EXIT_OK


def _parse_check(args) -> int:
    """
    Parse a group description and print its canonical form
    """
    ast = parse_spec(args.spec)
    graph = build_graph(ast, pathlib.Path.cwd())
    print(f"{format_spec(ast)}: {graph.generator_count} generators")
    return EXIT_OK


def _parser():
    parser = argparse.ArgumentParser(description="finite-radius analysis of ends of groups and coset graphs")
    parser.add_argument("--log-level", choices=["info", "debug"], default="info")
    parser.add_argument("--log-file", type=pathlib.Path, help="write log to given file instead of stdout")
    parser.add_argument("--log-console", action="store_true", help="write log to stdout")
    p_sub = parser.add_subparsers(help="sub-command help")

    # analyze
    p_analyze = p_sub.add_parser("analyze", help="Run ends analyses on a group spec")
    p_analyze.add_argument("spec", nargs="?", help="the group spec, e.g. 'product(free(2), Z)'")
    p_analyze.add_argument("--request", type=pathlib.Path, help="a YAML analysis request instead of a spec")
    p_analyze.add_argument("--rmax", type=int, help="largest inner radius")
    p_analyze.add_argument("--Rmax", type=int, help="largest outer radius, at least 2*rmax+4")
    p_analyze.add_argument("--budget", type=int, help="vertex budget")
    p_analyze.add_argument("--format", choices=["json", "table", "dot"], help="output format")
    p_analyze.add_argument("--analyses", type=_analyses, help=f"comma separated subset of {','.join(ANALYSES)}")
    p_analyze.add_argument("--radius", type=int, default=3, help="ball radius for --format dot")
    p_analyze.set_defaults(func=_analyze)

    # export-dot / export-ball
    for verb, func, what in (("export-dot", _export_dot, "DOT"), ("export-ball", _export_ball, "JSON")):
        p_export = p_sub.add_parser(verb, help=f"Write a ball of the Cayley or coset graph as {what}")
        p_export.add_argument("spec", help="the group spec")
        p_export.add_argument("--radius", type=int, default=3, help="ball radius")
        p_export.add_argument("--budget", type=int, default=5_000_000, help="vertex budget")
        p_export.set_defaults(func=func)

    # parse-check
    p_check = p_sub.add_parser("parse-check", help="Check a group spec and print its canonical form")
    p_check.add_argument("spec", help="the group spec")
    p_check.set_defaults(func=_parse_check)

    return parser


def main(argv=None):
    parser = _parser()
    args = parser.parse_args(argv)
    log_formatter = logging.Formatter("%(asctime)s:%(name)s:%(levelname)s:%(message)s")
    # log level
    loglevel = logging.INFO
    if args.log_level == "debug":
        loglevel = logging.DEBUG
    root_logger = logging.getLogger()
    root_logger.setLevel(loglevel)
    # log file
    if args.log_file:
        file_handler = logging.FileHandler(filename=args.log_file)
        file_handler.setFormatter(log_formatter)
        root_logger.addHandler(file_handler)
    # log console
    if args.log_console:
        console_handler = logging.StreamHandler()
        console_handler.setFormatter(log_formatter)
        root_logger.addHandler(console_handler)
    if "func" not in args:
        sys.exit(parser.print_help())
    try:
        code = args.func(args)
    except SpecError as e:
        logger.error(f"invalid group spec: {e}")
        print(f"error: {e}", file=sys.stderr)
        sys.exit(EXIT_PARSE)
    except BallOverflowError as e:
        logger.error(str(e))
        print(f"error: {e}", file=sys.stderr)
        sys.exit(EXIT_BUDGET)
    except (EndsLabError, ValidationError) as e:
        logger.error(str(e))
        print(f"error: {e}", file=sys.stderr)
        sys.exit(EXIT_ERROR)
    sys.exit(code)


if __name__ == "__main__":
    main()
