"""Command line entry point: Monte Carlo sweeps and pattern cuts.

    nomabeam simulate --config rural.cfg [--trials N] [--seed S] --out results.csv
    nomabeam pattern  --config rural.cfg --beam 1.5708,0.0 --out pattern.csv

``simulate`` runs the configured sweep and writes one CSV row per
(scheme, K, trial); ``pattern`` writes normalized array-pattern cuts of a
beam steered at the given (theta, phi) in radians, for plotting.
"""

from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from .array_geometry import Direction
from .channel import InvalidParams
from .sim_harness import ConfigError, format_aggregates, load_scenario, run_sweep, write_csv

PATTERN_STEP_RAD = 1e-3


def _parse_beam(raw: str) -> Direction:
    parts = raw.split(",")
    if len(parts) != 2:
        raise ConfigError(f"--beam expects 'theta,phi' in radians, got {raw!r}")
    try:
        return Direction(float(parts[0]), float(parts[1]))
    except ValueError as exc:
        raise ConfigError(f"--beam expects 'theta,phi' in radians, got {raw!r}: {exc}") from exc


def _cmd_simulate(args: argparse.Namespace) -> int:
    config = load_scenario(args.config, trials=args.trials, master_seed=args.seed)
    results, aggregates = run_sweep(config)
    write_csv(results, args.out)
    print(format_aggregates(aggregates))
    print(f"wrote {len(results)} rows to {args.out}")
    return 0


def _cmd_pattern(args: argparse.Namespace) -> int:
    from .array_geometry import array_factor  # local import keeps CLI startup light

    config = load_scenario(args.config)
    cfg = config.array_config
    beam = _parse_beam(args.beam)
    lines = ["axis,offset_rad,theta_rad,phi_rad,array_factor"]
    offsets = np.arange(-math.pi / 2, math.pi / 2 + PATTERN_STEP_RAD, PATTERN_STEP_RAD)
    for axis in ("az", "el"):
        for off in offsets:
            if axis == "az":
                probe = Direction(beam.theta + off, beam.phi)
            else:
                phi = beam.phi + off
                if not -math.pi / 2 <= phi <= math.pi / 2:
                    continue
                probe = Direction(beam.theta, phi)
            value = array_factor(cfg, beam, probe)
            lines.append(
                f"{axis},{off:.9g},{probe.theta:.9g},{probe.phi:.9g},{value:.9g}"
            )
    with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
    print(f"wrote pattern cuts to {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nomabeam",
        description="Link-level simulator for a beam-steered mmWave downlink with 2-user power-domain sharing.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run the configured Monte Carlo sweep")
    sim.add_argument("--config", required=True, help="scenario file (flat key = value text)")
    sim.add_argument("--trials", type=int, default=None, help="override the configured trial count")
    sim.add_argument("--seed", type=int, default=None, help="override the configured master seed")
    sim.add_argument("--out", required=True, help="output CSV path")
    sim.set_defaults(func=_cmd_simulate)

    pat = sub.add_parser("pattern", help="emit array-pattern cuts for a steered beam")
    pat.add_argument("--config", required=True, help="scenario file (flat key = value text)")
    pat.add_argument("--beam", required=True, help="beam direction 'theta,phi' in radians")
    pat.add_argument("--out", required=True, help="output CSV path")
    pat.set_defaults(func=_cmd_pattern)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, InvalidParams) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
