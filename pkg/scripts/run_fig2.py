#!/usr/bin/env python3
"""Desk-scale run of the Ramsey experiments: static vs frequency-averaged.

Writes fig2a/ (static histogram), fig2b/ (averaged histogram), fig2c/
(static-vs-averaged sweep) and fig2d/ (averaged-error scaling) under --out.
"""

import argparse
from pathlib import Path

from gdbench.mc import ExperimentConfig, run_experiment, write_dataset

SWEEP = (1e-4, 3e-4, 1e-3, 3e-3, 1e-2)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="out", help="output root directory")
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--trials", type=int, default=2000)
    args = ap.parse_args()

    root = Path(args.out)
    runs = (
        ("fig2a", dict(s=1e-3, n_trials=args.trials)),
        ("fig2b", dict(s=1e-3, n_trials=args.trials)),
        ("fig2c", dict(s_list=SWEEP, n_trials=max(args.trials // 4, 100))),
        ("fig2d", dict(s_list=SWEEP, n_trials=max(args.trials // 2, 100))),
    )
    for exp, kw in runs:
        cfg = ExperimentConfig(experiment=exp, seed=args.seed, **kw)
        write_dataset(run_experiment(cfg), root / exp)
        print(f"{exp} -> {root / exp}")


if __name__ == "__main__":
    main()
