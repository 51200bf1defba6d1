"""Command-line interface.

Subcommands:
    price     estimate one market's intrinsic value, classical vs quantum
    sweep     error-scaling table over growing circuit counts (CSV)
    fidelity  Hellinger fidelity of the circuits under depolarizing noise
    validate  schema-check a scenario file and print derived quantities

Report commands write JSON (price, fidelity) or CSV (sweep) to ``--out`` and
render a PNG figure alongside unless ``--no-figure`` is given.  Exit code 0 on
success, 2 on validation failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .errors import ModelError, ScenarioFormatError
from .harness import (
    SWEEP_BASE_POWERS,
    ExperimentConfig,
    run_fidelity_study,
    run_price_scenario,
    run_scaling_sweep,
    validate_scenario_report,
    write_json,
    write_sweep_csv,
)
from .scenario import MARKET_LABELS, default_scenario_path, load_scenario

_EXIT_VALIDATION = 2


def _parse_seeds(text: str) -> tuple[int, ...]:
    try:
        seeds = tuple(int(tok) for tok in text.split(",") if tok.strip() != "")
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad seed list {text!r}: {exc}") from exc
    if not seeds:
        raise argparse.ArgumentTypeError("seed list is empty")
    return seeds


def _parse_schedule(text: str) -> tuple[int, ...]:
    try:
        powers = tuple(int(tok) for tok in text.split(",") if tok.strip() != "")
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad schedule {text!r}: {exc}") from exc
    if not powers or any(m < 0 for m in powers):
        raise argparse.ArgumentTypeError("schedule needs non-negative powers")
    return powers


def _add_common(parser: argparse.ArgumentParser, default_schedule: str) -> None:
    parser.add_argument(
        "--scenario", type=Path, default=default_scenario_path(),
        help="scenario JSON file (default: bundled five-index portfolio)",
    )
    parser.add_argument(
        "--market", choices=MARKET_LABELS, default="stable", help="market trend"
    )
    parser.add_argument(
        "--schedule", type=_parse_schedule, default=_parse_schedule(default_schedule),
        help=f"comma-separated amplification powers (default {default_schedule})",
    )
    parser.add_argument("--shots", type=int, default=1000, help="shots per circuit")
    parser.add_argument(
        "--seed", type=_parse_seeds, default=(0,),
        help="comma-separated seed list (default 0)",
    )
    parser.add_argument(
        "--mode", choices=("exact", "linear"), default="exact",
        help="payoff encoding: exact per-state rotation or linear rotation",
    )
    parser.add_argument(
        "--scaling-c", type=float, default=0.25,
        help="rotation scaling c for linear mode (default 0.25)",
    )
    parser.add_argument(
        "--noise", type=float, default=0.0, help="depolarizing rate per gate"
    )
    parser.add_argument("--out", type=Path, default=None, help="output file path")
    parser.add_argument(
        "--no-figure", action="store_true", help="skip rendering the PNG figure"
    )


def _config(args: argparse.Namespace) -> ExperimentConfig:
    mode = "linear_rotation" if args.mode == "linear" else "exact"
    return ExperimentConfig(
        scenario_path=args.scenario,
        market=args.market,
        grover_powers=args.schedule,
        shots=args.shots,
        seeds=args.seed,
        mode=mode,
        scaling=args.scaling_c,
        noise_rate=args.noise,
        out_path=args.out,
    )


def _emit(obj, args: argparse.Namespace) -> None:
    if args.out is None:
        print(json.dumps(obj, indent=2, sort_keys=True))
    else:
        write_json(obj, args.out)
        print(f"wrote {args.out}")


def cmd_price(args: argparse.Namespace) -> int:
    report = run_price_scenario(_config(args))
    _emit(report, args)
    if args.out is not None and not args.no_figure:
        from .plots import figure_path_for, render_price_figure

        print(f"wrote {render_price_figure(report, figure_path_for(args.out))}")
    else:
        summary = report["summary"]
        print(
            f"{args.market}: quantum {summary['quantum_mean_euros']:.2f} "
            f"+/- {summary['quantum_sigma_euros']:.2f} EUR, classical "
            f"{summary['classical_mean_euros']:.2f} +/- "
            f"{summary['classical_sigma_euros']:.2f} EUR "
            f"(market {report['market_value_euros']:.2f} EUR)"
        )
    return 0


def cmd_sweep(args: argparse.Namespace) -> int:
    rows, slopes = run_scaling_sweep(_config(args))
    if args.out is None:
        for row in rows:
            print(row)
    else:
        write_sweep_csv(rows, args.out)
        print(f"wrote {args.out}")
        if not args.no_figure:
            from .plots import figure_path_for, render_sweep_figure

            print(f"wrote {render_sweep_figure(rows, slopes, figure_path_for(args.out))}")
    print(
        f"fitted slopes: classical {slopes['classical']:+.3f}, "
        f"quantum {slopes['quantum']:+.3f}"
    )
    return 0


def cmd_fidelity(args: argparse.Namespace) -> int:
    reports = [r.to_dict() for r in run_fidelity_study(_config(args))]
    payload = {"market": args.market, "noise_rate": args.noise, "circuits": reports}
    _emit(payload, args)
    if args.out is not None and not args.no_figure:
        from .plots import figure_path_for, render_fidelity_figure

        print(f"wrote {render_fidelity_figure(reports, figure_path_for(args.out))}")
    return 0


def cmd_validate(args: argparse.Namespace) -> int:
    scenario = load_scenario(args.scenario)
    report = validate_scenario_report(scenario)
    print(json.dumps(report, indent=2, sort_keys=True))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qportval",
        description="Portfolio intrinsic-value estimation: amplitude estimation vs Monte Carlo",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_price = sub.add_parser("price", help="price one market trend")
    _add_common(p_price, default_schedule="0,2")
    p_price.set_defaults(func=cmd_price)

    p_sweep = sub.add_parser("sweep", help="error-scaling sweep (CSV)")
    _add_common(p_sweep, default_schedule=",".join(map(str, SWEEP_BASE_POWERS)))
    p_sweep.set_defaults(func=cmd_sweep)

    p_fid = sub.add_parser("fidelity", help="noise-model fidelity study")
    _add_common(p_fid, default_schedule="0,2")
    p_fid.set_defaults(func=cmd_fidelity)

    p_val = sub.add_parser("validate", help="check a scenario file")
    p_val.add_argument(
        "--scenario", type=Path, default=default_scenario_path(),
        help="scenario JSON file (default: bundled five-index portfolio)",
    )
    p_val.set_defaults(func=cmd_validate)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ScenarioFormatError as exc:
        print(f"scenario validation failed: {exc}", file=sys.stderr)
        return _EXIT_VALIDATION
    except ModelError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
