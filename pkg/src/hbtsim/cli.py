"""Command-line interface: run scenarios, list presets, compare runs.

Exit codes: 0 success, 1 physics/fit failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys

from .errors import SimulationError
from .scenarios import (
    ConfigError,
    compare_runs,
    list_presets,
    load_config_file,
    parse_config,
    preset_config,
    run_scenario,
)


def _split_assignment(text: str, flag: str) -> tuple[str, str]:
    if "=" not in text:
        raise ConfigError(f"{flag} expects key=value, got {text!r}")
    key, value = text.split("=", 1)
    return key.strip(), value.strip()


def _cmd_run(args) -> int:
    if args.preset is None and args.config is None:
        raise ConfigError("give --preset and/or --config")
    flat: dict[str, str] = {}
    if args.preset:
        flat.update(preset_config(args.preset))
    if args.config:
        flat.update(load_config_file(args.config))
    for item in args.set or []:
        key, value = _split_assignment(item, "--set")
        flat[key] = value
    if args.seed is not None:
        flat["mc.seed"] = str(args.seed)
    if args.samples is not None:
        flat["mc.samples"] = str(args.samples)
    if args.out is not None:
        flat["output.directory"] = args.out
    if args.format is not None:
        flat["output.formats"] = args.format

    config = parse_config(flat)
    report = run_scenario(config)

    print(f"scenario: {report.scenario}")
    for key, value in report.analytic.items():
        print(f"  analytic {key}: {value}")
    if report.mc:
        for key, value in report.mc.items():
            print(f"  mc {key}: {value}")
    for comp in report.comparisons:
        status = "pass" if comp["pass"] else "FAIL"
        print(
            f"  [{status}] {comp['name']}: {comp['value_a']} vs {comp['value_b']} "
            f"(diff {comp['difference']}, tol {comp['tolerance']})"
        )
    if config.output.directory is not None:
        print(f"  outputs in {config.output.directory}")
    return 0 if report.passed() else 1


def _cmd_presets(_args) -> int:
    print(list_presets())
    return 0


def _cmd_compare(args) -> int:
    tolerances = {}
    for item in args.tol or []:
        key, value = _split_assignment(item, "--tol")
        try:
            tolerances[key] = float(value)
        except ValueError:
            raise ConfigError(f"--tol {key}: cannot parse {value!r} as float") from None
    try:
        summary = compare_runs(args.report_a, args.report_b, tolerances)
    except (OSError, ValueError, KeyError) as err:
        raise ConfigError(str(err)) from None
    print(json.dumps(summary, indent=2))
    return 0 if summary["pass"] else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hbtsim",
        description="Two-particle Hanbury Brown-Twiss interference scenarios",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run one scenario and emit curves plus a report")
    run.add_argument("--preset", help="built-in scenario preset name")
    run.add_argument("--config", help="flat key = value configuration file")
    run.add_argument("--set", action="append", metavar="KEY=VALUE",
                     help="override one configuration field (repeatable)")
    run.add_argument("--seed", type=int, help="Monte Carlo seed (mc.seed)")
    run.add_argument("--samples", type=int, help="Monte Carlo sample count (mc.samples)")
    run.add_argument("--out", help="output directory (output.directory)")
    run.add_argument("--format", help="output formats, e.g. csv,json")
    run.set_defaults(func=_cmd_run)

    presets = sub.add_parser("presets", help="list built-in scenario presets")
    presets.set_defaults(func=_cmd_presets)

    compare = sub.add_parser("compare", help="compare two written run reports")
    compare.add_argument("report_a")
    compare.add_argument("report_b")
    compare.add_argument("--tol", action="append", metavar="KEY=VALUE",
                         help="override a comparison tolerance (curve, period, visibility)")
    compare.set_defaults(func=_cmd_compare)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except SimulationError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
