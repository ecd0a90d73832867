#!/usr/bin/env python3
"""Desk-scale run of the T1-robustness experiments (histogram + scaling sweep).

Writes fig1a/ and fig1b/ dataset directories under --out.
"""

import argparse
from pathlib import Path

from gdbench.mc import ExperimentConfig, run_experiment, write_dataset


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="out", help="output root directory")
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--trials", type=int, default=2000,
                    help="trials for the histogram (sweep uses half)")
    args = ap.parse_args()

    root = Path(args.out)
    cfg = ExperimentConfig(experiment="fig1a", n_trials=args.trials,
                           seed=args.seed, s=1e-3)
    write_dataset(run_experiment(cfg), root / "fig1a")
    print(f"fig1a -> {root / 'fig1a'}")

    cfg = ExperimentConfig(experiment="fig1b", n_trials=max(args.trials // 2, 100),
                           seed=args.seed, s_list=(1e-4, 3e-4, 1e-3, 3e-3, 1e-2))
    write_dataset(run_experiment(cfg), root / "fig1b")
    print(f"fig1b -> {root / 'fig1b'}")


if __name__ == "__main__":
    main()
