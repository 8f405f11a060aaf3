# Copyright (c) DILI simulator contributors.
# All rights reserved.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.
#

# pyre-strict

"""
Command-line entry point.

    dili run SCENARIO [--trace PATH] [--metrics PATH] [--log-messages]
                      [--max-ticks N] [--seed N] [--scoring NAME] [--script FILE]
    dili verify SCENARIO TRACE
    dili oracle SCENARIO [--max-states N] [--max-depth N] [--greedy]
    dili render SCENARIO TRACE [--every K] [--format ascii|svg] [--out DIR]
    dili bench DIR [--seeds A..B] [--jobs N] [--csv PATH]

Exit codes: 0 success, 1 failed check or goal not reached, 2 usage or parse
error. Command-line values take precedence over the scenario file, which
takes precedence over built-in defaults.
"""

import argparse
import logging
import sys
from dataclasses import replace
from pathlib import Path

from dili.agents.scoring import SCORING_MODULES
from dili.api.scenario import Scenario, SimParams
from dili.engine.guard import SafetyViolation
from dili.engine.simulation import run, run_script
from dili.io.render import render_ascii, render_svg, trace_frames
from dili.io.report import metrics_report
from dili.io.scenario_format import load_scenario, parse_script, ScenarioParseError
from dili.io.trace_format import load_trace, save_trace, TraceFormatError
from dili.oracle.greedy import greedy_baseline
from dili.oracle.search import SearchBounds, solve
from dili.oracle.verifier import verify_trace
from dili.utils.scripts.bench import format_bench, parse_seed_range, run_bench

logger: logging.Logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2


def _positive(text: str) -> int:
    value = int(text)
    if value <= 0:
        raise argparse.ArgumentTypeError(f"{text} is not a positive integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dili", description="Distributed modular conveyor simulator."
    )
    parser.add_argument("--verbose", action="store_true", help="debug logging on stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="simulate a scenario")
    p.add_argument("scenario", type=Path)
    p.add_argument("--trace", type=Path)
    p.add_argument("--metrics", type=Path)
    p.add_argument("--log-messages", action="store_true")
    p.add_argument("--max-ticks", type=_positive)
    p.add_argument("--seed", type=int)
    p.add_argument("--scoring", choices=sorted(SCORING_MODULES))
    p.add_argument("--script", type=Path, help="operator maneuvers instead of agents")

    p = sub.add_parser("verify", help="check a trace against its scenario")
    p.add_argument("scenario", type=Path)
    p.add_argument("trace", type=Path)

    p = sub.add_parser("oracle", help="centralized optimal motion count")
    p.add_argument("scenario", type=Path)
    p.add_argument("--max-states", type=_positive, default=SearchBounds.max_states)
    p.add_argument("--max-depth", type=_positive, default=SearchBounds.max_depth)
    p.add_argument("--greedy", action="store_true", help="also run the greedy baseline")

    p = sub.add_parser("render", help="draw frames of a trace")
    p.add_argument("scenario", type=Path)
    p.add_argument("trace", type=Path)
    p.add_argument("--every", type=_positive, default=1)
    p.add_argument("--format", choices=["ascii", "svg"], default="ascii")
    p.add_argument("--out", type=Path, default=Path("."))

    p = sub.add_parser("bench", help="run a directory of scenarios over seeds")
    p.add_argument("directory", type=Path)
    p.add_argument("--seeds")
    p.add_argument("--jobs", type=_positive, default=1)
    p.add_argument("--csv", type=Path)
    return parser


def resolve_params(scenario: Scenario, args: argparse.Namespace) -> SimParams:
    """Applies command-line overrides on top of the scenario's parameters."""
    params = scenario.params
    overrides: dict[str, object] = {}
    if getattr(args, "seed", None) is not None:
        overrides["seed"] = args.seed
    if getattr(args, "max_ticks", None) is not None:
        overrides["max_ticks"] = args.max_ticks
    if getattr(args, "scoring", None) is not None:
        overrides["scoring"] = args.scoring
    if getattr(args, "log_messages", False):
        overrides["log_messages"] = True
    return replace(params, **overrides) if overrides else params


def cmd_run(args: argparse.Namespace) -> int:
    scenario = load_scenario(args.scenario)
    params = resolve_params(scenario, args)
    try:
        if args.script is not None:
            trace, metrics = run_script(
                scenario, parse_script(args.script.read_text()), params
            )
        else:
            trace, metrics = run(scenario, params)
    except SafetyViolation as e:
        logger.error(f"safety violation: {e}")
        return EXIT_FAILED
    if args.trace is not None:
        save_trace(trace, args.trace)
    report = metrics_report(metrics)
    if args.metrics is not None:
        args.metrics.write_text(report)
    else:
        sys.stdout.write(report)
    return EXIT_OK if metrics.goal_reached else EXIT_FAILED


def cmd_verify(args: argparse.Namespace) -> int:
    scenario = load_scenario(args.scenario)
    report = verify_trace(scenario, load_trace(args.trace))
    sys.stdout.write(report.render())
    return EXIT_OK if report.passed else EXIT_FAILED


def cmd_oracle(args: argparse.Namespace) -> int:
    scenario = load_scenario(args.scenario)
    result = solve(scenario, SearchBounds(args.max_states, args.max_depth))
    sys.stdout.write(f"optimal={result.describe()}\n")
    if args.greedy:
        greedy = greedy_baseline(scenario)
        sys.stdout.write(f"greedy={'stalled' if greedy.stalled else greedy.motions}\n")
    return EXIT_OK


def cmd_render(args: argparse.Namespace) -> int:
    scenario = load_scenario(args.scenario)
    trace = load_trace(args.trace)
    if args.format == "svg":
        args.out.mkdir(parents=True, exist_ok=True)
    for frame in trace_frames(scenario, trace, args.every):
        if args.format == "svg":
            path = args.out / f"frame_{frame.index}.svg"
            render_svg(scenario, frame.config, path, frame.overlay, frame.grid)
        else:
            sys.stdout.write(f"frame {frame.index} at={frame.at}\n")
            sys.stdout.write(render_ascii(scenario, frame.config, frame.overlay, frame.grid))
    return EXIT_OK


def cmd_bench(args: argparse.Namespace) -> int:
    seeds = parse_seed_range(args.seeds) if args.seeds else None
    table = run_bench(args.directory, seeds, args.jobs)
    sys.stdout.write(format_bench(table))
    if args.csv is not None:
        table.to_csv(args.csv, index=False)
    return EXIT_OK if bool(table["goal"].all()) else EXIT_FAILED


COMMANDS = {
    "run": cmd_run,
    "verify": cmd_verify,
    "oracle": cmd_oracle,
    "render": cmd_render,
    "bench": cmd_bench,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return COMMANDS[args.command](args)
    except (ScenarioParseError, TraceFormatError, OSError, ValueError) as e:
        sys.stderr.write(f"{args.command}: {e}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
