"""Command line interface: gdbench run | bounds | fit."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from gdbench.diamond import bound_report
from gdbench.estimation import DecaySeries, fit_exponential
from gdbench.mc import ExperimentConfig, parse_config, run_experiment, write_dataset, load_general_bound
from gdbench.model import PerturbedGDParams


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gdbench")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a Monte Carlo figure experiment")
    run.add_argument("--experiment", help="experiment id (fig1a ... fig4)")
    run.add_argument("--config", help="key=value config file")
    run.add_argument("--seed", type=int, help="64-bit RNG seed")
    run.add_argument("--trials", type=int, help="trials per point")
    run.add_argument("--out", required=True, help="output directory")

    bounds = sub.add_parser("bounds", help="diamond-distance bounds for one channel")
    bounds.add_argument("--params", required=True, help="key=value parameter file")

    fit = sub.add_parser("fit", help="fit a decay CSV to c1*exp(-rate*t)+c0")
    fit.add_argument("--input", required=True, help="two-column CSV (time,value)")
    return parser


def _cmd_run(args) -> int:
    overrides = {
        "experiment": args.experiment,
        "seed": str(args.seed) if args.seed is not None else None,
        "n_trials": str(args.trials) if args.trials is not None else None,
    }
    if args.config:
        cfg = parse_config(args.config, overrides)
    else:
        if not args.experiment:
            print("error: --experiment or --config is required", file=sys.stderr)
            return 2
        kwargs = {"experiment": args.experiment}
        if args.seed is not None:
            kwargs["seed"] = args.seed
        if args.trials is not None:
            kwargs["n_trials"] = args.trials
        cfg = ExperimentConfig(**kwargs)
    result = run_experiment(cfg)
    write_dataset(result, args.out)
    print(f"wrote {len(result.trials)} trials to {args.out}")
    return 0


def _read_kv(path) -> dict:
    out = {}
    for line in Path(path).read_text().splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, _, value = line.partition("=")
        out[key.strip()] = value.strip()
    return out


def _cmd_bounds(args) -> int:
    raw = _read_kv(args.params)
    known = {
        "gamma1": 0.01,
        "gamma2": 0.095,
        "lambda": 1.0,
        "alpha_r": 0.0,
        "alpha_i": 0.0,
        "beta": 0.0,
        "delta": 0.0,
        "dt": 1.0,
        "oracle": "false",
        "oracle_restarts": 50,
        "general_bound": "",
    }
    unknown = set(raw) - set(known)
    if unknown:
        print(f"error: unknown parameter keys {sorted(unknown)}", file=sys.stderr)
        return 2
    known.update(raw)
    params = PerturbedGDParams(
        gamma1_rate=float(known["gamma1"]),
        gamma2_rate=float(known["gamma2"]),
        lambda_eq=float(known["lambda"]),
        alpha_r=float(known["alpha_r"]),
        alpha_i=float(known["alpha_i"]),
        beta_raw=float(known["beta"]),
        delta_raw=float(known["delta"]),
    )
    report = bound_report(
        params,
        float(known["dt"]),
        with_oracle=str(known["oracle"]).lower() in ("1", "true", "yes"),
        oracle_restarts=int(known["oracle_restarts"]),
        general_bound_fn=load_general_bound(str(known["general_bound"])),
    )
    print(report.to_json())
    return 0


def _cmd_fit(args) -> int:
    series = DecaySeries.from_csv(Path(args.input).read_text())
    result = fit_exponential(series)
    print(
        json.dumps(
            {
                "c1": result.c1,
                "rate": result.rate,
                "c0": result.c0,
                "rms_residual": result.rms_residual,
                "converged": result.converged,
                "iterations": result.iterations,
            }
        )
    )
    return 0 if result.converged else 1


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handlers = {"run": _cmd_run, "bounds": _cmd_bounds, "fit": _cmd_fit}
    try:
        return handlers[args.command](args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
