"""Command-line entry point.

    spinshor run-shor   [--jprime J2] [--rabi OMEGA]
    spinshor sweep --var {jprime,omega} [--grid-start A --grid-stop B --grid-step S | --grid-points N]
    spinshor rabi-table [--k-min 1 --k-max 300]
    spinshor selftest

Common options: ``--config run.json``, ``--out DIR``, ``--threads N``,
``--step US`` (fixed RK4 step in microseconds).  Flags override the config
file.  Frequencies are in 2*pi*MHz, exactly as quoted for the chain.

Exit codes: 0 success, 1 failed check or protocol, 2 usage or configuration
error.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from spinshor import analysis, checks
from spinshor.dynamics import IntegratorConfig
from spinshor.pulse_control import rabi_table, write_rabi_table
from spinshor.shor import (
    STAGE_NAMES,
    ProtocolFailure,
    expected_wavefunction,
    run_shor,
)
from spinshor.spin_core import DEFAULT_RABI, ChainParameters

log = logging.getLogger("spinshor")

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

CONFIG_KEYS = {
    "larmor", "j1", "j2", "rabi", "max_phase_step", "step", "record_stride", "out",
    "threads", "grid_start", "grid_stop", "grid_step", "grid_points", "k_min", "k_max",
}


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    """Flat run configuration; every key may also be given in the JSON file."""

    params: ChainParameters = field(default_factory=ChainParameters)
    rabi: float = DEFAULT_RABI
    integrator: IntegratorConfig = field(default_factory=IntegratorConfig)
    out: Path = Path("out")
    threads: int | None = None
    grid_start: float | None = None
    grid_stop: float | None = None
    grid_step: float | None = None
    grid_points: int | None = None
    k_min: int = 1
    k_max: int = 300

    @classmethod
    def from_mapping(cls, data: dict) -> "RunConfig":
        unknown = set(data) - CONFIG_KEYS
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        try:
            params = ChainParameters.from_dict(data)
            rabi = float(data.get("rabi", DEFAULT_RABI))
            if not (math.isfinite(rabi) and rabi > 0):
                raise ConfigError(f"rabi must be positive, got {rabi}")
            integrator = IntegratorConfig(
                max_phase_step=float(data.get("max_phase_step", IntegratorConfig.max_phase_step)),
                fixed_step_override=data.get("step"),
                record_stride=int(data.get("record_stride", IntegratorConfig.record_stride)),
            )
            cfg = cls(
                params=params,
                rabi=rabi,
                integrator=integrator,
                out=Path(data.get("out", "out")),
                threads=data.get("threads"),
                grid_start=data.get("grid_start"),
                grid_stop=data.get("grid_stop"),
                grid_step=data.get("grid_step"),
                grid_points=data.get("grid_points"),
                k_min=int(data.get("k_min", 1)),
                k_max=int(data.get("k_max", 300)),
            )
        except (TypeError, ValueError) as exc:
            raise ConfigError(str(exc)) from exc
        if cfg.threads is not None and int(cfg.threads) < 1:
            raise ConfigError("threads must be >= 1")
        if cfg.k_min < 1 or cfg.k_max < cfg.k_min:
            raise ConfigError("need 1 <= k_min <= k_max")
        return cfg

    def grid(self, default) -> tuple[float, ...]:
        if self.grid_points is not None:
            if self.grid_points < 1:
                raise ConfigError("grid_points must be >= 1")
            lo = default[0] if self.grid_start is None else self.grid_start
            hi = default[-1] if self.grid_stop is None else self.grid_stop
            return tuple(np.round(np.linspace(lo, hi, int(self.grid_points)), 10))
        if self.grid_start is None and self.grid_stop is None and self.grid_step is None:
            return tuple(default)
        lo = default[0] if self.grid_start is None else self.grid_start
        hi = default[-1] if self.grid_stop is None else self.grid_stop
        step = self.grid_step if self.grid_step is not None else default[1] - default[0]
        if not step > 0:
            raise ConfigError("grid step must be positive")
        return tuple(np.round(np.arange(lo, hi + step * 1e-6, step), 10))


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="JSON run configuration")
    common.add_argument("--out", type=Path, help="output directory")
    common.add_argument("--threads", type=int, help="worker processes for sweeps")
    common.add_argument("--step", type=float, help="fixed RK4 step (us)")
    common.add_argument("--j1", type=float, help="first-neighbour coupling J")
    common.add_argument("--jprime", type=float, dest="j2", help="second-neighbour coupling J'")
    common.add_argument("--rabi", type=float, help="Rabi frequency Omega")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="spinshor", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("run-shor", parents=[common], help="run the 12-pulse protocol")
    sweep = sub.add_parser("sweep", parents=[common], help="fidelity sweep over J'/J or Omega")
    sweep.add_argument("--var", choices=("jprime", "omega"), required=True)
    sweep.add_argument("--grid-start", type=float)
    sweep.add_argument("--grid-stop", type=float)
    sweep.add_argument("--grid-step", type=float)
    sweep.add_argument("--grid-points", type=int)
    table = sub.add_parser("rabi-table", parents=[common], help="2*pi*k Rabi frequencies")
    table.add_argument("--k-min", type=int)
    table.add_argument("--k-max", type=int)
    sub.add_parser("selftest", parents=[common], help="integrator self-checks")
    return parser


def load_config(args: argparse.Namespace) -> RunConfig:
    data: dict = {}
    if args.config is not None:
        try:
            data = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError("config file must hold a JSON object")
    overrides = {
        "out": args.out, "threads": args.threads, "step": args.step,
        "j1": args.j1, "j2": args.j2, "rabi": args.rabi,
        "grid_start": getattr(args, "grid_start", None),
        "grid_stop": getattr(args, "grid_stop", None),
        "grid_step": getattr(args, "grid_step", None),
        "grid_points": getattr(args, "grid_points", None),
        "k_min": getattr(args, "k_min", None),
        "k_max": getattr(args, "k_max", None),
    }
    data.update({k: v for k, v in overrides.items() if v is not None})
    return RunConfig.from_mapping(data)


def _prepare_out(cfg: RunConfig) -> Path:
    try:
        cfg.out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise ConfigError(f"cannot create output directory {cfg.out}: {exc}") from exc
    if not os.access(cfg.out, os.W_OK):
        raise ConfigError(f"output directory {cfg.out} is not writable")
    return cfg.out


def cmd_run_shor(cfg: RunConfig) -> int:
    out = _prepare_out(cfg)
    try:
        outcome = run_shor(cfg.params, cfg.rabi, cfg.integrator, record=True)
    except ProtocolFailure as exc:
        print(f"protocol failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    outcome.write_json(out / "outcome.json")
    for name in STAGE_NAMES:
        traj = outcome.trajectories[name]
        traj.write_csv(out / f"trajectory_{name}.csv")
        spins = analysis.spin_expectations(traj.probabilities)
        with open(out / f"spins_{name}.csv", "w") as fh:
            fh.write("t,Iz0,Iz1,Iz2,Iz3\n")
            for t, row in zip(traj.times, spins):
                fh.write(",".join([f"{t:.12g}"] + [f"{v:.12g}" for v in row]) + "\n")
    with open(out / "final_distribution.csv", "w") as fh:
        fh.write("state,probability\n")
        for m, p in enumerate(outcome.probabilities):
            fh.write(f"{m},{p:.12g}\n")

    report = analysis.fidelity(expected_wavefunction(), outcome.final)
    print(f"x-register marginal: {np.round(outcome.marginal, 6).tolist()}")
    print(f"fidelity |F| = {report.magnitude:.6f}, population fidelity = {report.population:.6f}")
    if not outcome.succeeded:
        print(f"no factors: {outcome.diagnostic}")
        return EXIT_OK
    print(f"period T = {outcome.period}")
    print(f"factors = {outcome.factors[0]}, {outcome.factors[1]}")
    return EXIT_OK


def cmd_sweep(cfg: RunConfig, variable: str) -> int:
    out = _prepare_out(cfg)
    if variable == "jprime":
        grid = cfg.grid(analysis.JPRIME_GRID)
        spec = analysis.SweepSpec("jprime_ratio", grid, cfg.params, cfg.rabi)
    else:
        grid = cfg.grid(analysis.OMEGA_GRID)
        spec = analysis.SweepSpec("omega", grid, cfg.params, cfg.rabi)
    result = analysis.run_sweep(spec, cfg.integrator, cfg.threads)
    path = out / f"sweep_{variable}.csv"
    result.write_csv(path)
    print(f"wrote {path} ({len(grid)} points)")
    if variable == "omega":
        for x, y in analysis.prominent_peaks(result.grid, result.population):
            print(f"peak at Omega = {x:.6g} (population fidelity {y:.6f})")
    else:
        for metric in ("population", "magnitude"):
            onset = analysis.plateau_onset(result.grid, result.curve(metric))
            print(f"plateau onset ({metric}, >= 0.99 max): {onset}")
    return EXIT_OK


def cmd_rabi_table(cfg: RunConfig) -> int:
    out = _prepare_out(cfg)
    rows = rabi_table(cfg.params, range(cfg.k_min, cfg.k_max + 1))
    path = out / "rabi_table.csv"
    write_rabi_table(rows, path)
    print(f"wrote {path} ({len(rows)} rows)")
    return EXIT_OK


def cmd_selftest(cfg: RunConfig) -> int:
    failed = None
    for result in checks.run_all(cfg.params, cfg.rabi, cfg.integrator):
        print(result.line())
        if not result.passed and failed is None:
            failed = result.name
    if failed:
        print(f"selftest failed: {failed}", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def main(argv=None) -> int:
    parser = _parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = load_config(args)
        if args.command == "run-shor":
            return cmd_run_shor(cfg)
        if args.command == "sweep":
            return cmd_sweep(cfg, args.var)
        if args.command == "rabi-table":
            return cmd_rabi_table(cfg)
        return cmd_selftest(cfg)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
