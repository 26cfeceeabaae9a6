"""Command-line front end: ``ghzqfi sweep|preset|validate|topt``."""

from __future__ import annotations

import argparse
import itertools
import json
import logging
import sys
import warnings
from pathlib import Path

from . import ecc, oracle
from .core import Method, ParameterError, Scenario, SystemParams, validate
from .sweep import (PRESETS, GridPoint, SweepConfig, evaluate, expand_preset, format_csv,
                    format_json, run_sweep, write_rows)

log = logging.getLogger("ghzqfi")

ORACLE_TOL = 1e-6


def _cmd_sweep(args) -> int:
    config = SweepConfig.from_json(args.config)
    if args.workers:
        config = SweepConfig.from_dict({**config.to_dict(), "workers": args.workers})
    out = args.out if args.out is not None else config.out
    rows = run_sweep(config)
    if out in (None, "-"):
        sys.stdout.write(format_csv(rows) if config.format == "csv" else format_json(rows))
    else:
        write_rows(rows, out, config.format)
        log.info("wrote %d rows to %s", len(rows), out)
    return 0


def _cmd_preset(args) -> int:
    outdir = Path(args.out)
    for config in expand_preset(args.name):
        if args.workers:
            config = SweepConfig.from_dict({**config.to_dict(), "workers": args.workers})
        path = write_rows(run_sweep(config), outdir / config.out, config.format)
        print(path)
    return 0


def oracle_cross_check(n: int, scenario: Scenario) -> list[tuple[SystemParams, float, float]]:
    """Closed form against brute force on a small grid; returns (params, closed, oracle)."""
    if scenario is Scenario.NO_EC:
        grid = [SystemParams(n, wt, gt, tau=1.0) for wt, gt in
                itertools.product((0.1, 0.5, 1.0, 2.0), (0.01, 0.1, 0.5))]
    else:
        xi_p = {
            Scenario.PARITY_IDEAL: [(0.0, 0.0)],
            Scenario.PARITY_NOISY_ANCILLA: [(1e-4, 0.0), (0.1, 0.0)],
            Scenario.PARITY_IMPERFECT: [(0.0, 0.06)],
            Scenario.PARITY_GENERAL: [(1e-4, 0.06), (0.1, 0.06)],
            Scenario.BITFLIP: [(0.0, 0.0)],
        }[scenario]
        grid = [SystemParams(n, wt / gt, 1.0, xr, p, gt, rounds)
                for rounds, wt, gt, (xr, p) in itertools.product(
                    (1, 4, 8), (0.05, 0.2, 0.5), (0.005, 0.02, 0.1), xi_p)]
    out = []
    for params in grid:
        closed = evaluate(GridPoint(scenario, Method.EXACT, params)).qfi
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", oracle.DegenerateSpectrumWarning)
            brute = oracle.qfi_numeric(params, scenario).qfi
        out.append((params, closed, brute))
    return out


def _cmd_validate(args) -> int:
    scenario = Scenario(args.scenario)
    results = oracle_cross_check(args.n, scenario)
    worst = max(abs(c - b) / max(abs(b), 1e-300) for _, c, b in results)
    ok = worst < ORACLE_TOL
    print(f"{scenario.value} n={args.n}: {len(results)} points, "
          f"max relative difference {worst:.3e} ({'ok' if ok else 'FAIL'})")
    return 0 if ok else 1


def _cmd_topt(args) -> int:
    with open(args.params, encoding="utf-8") as fh:
        data = json.load(fh)
    params = validate(SystemParams(**data))
    formula = ecc.t_opt(params)
    rounds = ecc.argmax_rounds_case1(params)
    numeric = rounds * params.tau
    print(json.dumps({"t_opt": formula, "argmax_rounds": rounds, "argmax_t": numeric,
                      "relative_difference": (numeric - formula) / formula}))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ghzqfi", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sweep", help="run a sweep described by a JSON config")
    p.add_argument("--config", required=True)
    p.add_argument("--out", help="override the config's output path ('-' for stdout)")
    p.add_argument("--workers", type=int)
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("preset", help="write every curve of a figure preset")
    p.add_argument("name", choices=PRESETS)
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--workers", type=int)
    p.set_defaults(func=_cmd_preset)

    p = sub.add_parser("validate", help="cross-check closed forms against the brute-force oracle")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--scenario", required=True, choices=[s.value for s in Scenario])
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("topt", help="approximate and numeric optimal sensing time")
    p.add_argument("--params", required=True, help="JSON file with SystemParams fields")
    p.set_defaults(func=_cmd_topt)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (ParameterError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
