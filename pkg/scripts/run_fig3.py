#!/usr/bin/env python3
"""Desk-scale run of the diamond-bound chain sweep (fig3a) and, optionally,
the crossover study over dephasing rates (fig3b).

The numerical diamond oracle dominates the runtime; --trials controls
channels per sweep point.  If an external general-bound formula is
available, pass it as --general-bound module:function to enable the
crossover summary.
"""

import argparse
from pathlib import Path

from gdbench.mc import ExperimentConfig, run_experiment, write_dataset


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="out", help="output root directory")
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--trials", type=int, default=200, help="channels per point")
    ap.add_argument("--with-3b", action="store_true", help="also run fig3b")
    ap.add_argument("--general-bound", default="",
                    help="external bound as module:function (optional)")
    args = ap.parse_args()

    root = Path(args.out)
    cfg = ExperimentConfig(
        experiment="fig3a", n_trials=args.trials, seed=args.seed,
        s_list=(1e-4, 3e-4, 1e-3, 3e-3, 1e-2), oracle_restarts=8,
        general_bound=args.general_bound,
    )
    write_dataset(run_experiment(cfg), root / "fig3a")
    print(f"fig3a -> {root / 'fig3a'}")

    if args.with_3b:
        cfg = ExperimentConfig(
            experiment="fig3b", n_trials=args.trials, seed=args.seed,
            s_list=(1e-4, 1e-3, 1e-2), gamma2p_list=(0.05, 0.1, 0.2),
            oracle_restarts=8, general_bound=args.general_bound,
        )
        write_dataset(run_experiment(cfg), root / "fig3b")
        print(f"fig3b -> {root / 'fig3b'}")


if __name__ == "__main__":
    main()
