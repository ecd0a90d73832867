#!/usr/bin/env python3
"""Desk-scale run of the discrete-channel bound survey (fig4 heatmap data).

Samples generalized-damping channels with uniform unital-block noise at each
perturbation level p, computes the unitarity-based bound and the diamond
oracle per channel, and bins by error rate.
"""

import argparse
from pathlib import Path

from gdbench.mc import ExperimentConfig, run_experiment, write_dataset


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="out", help="output root directory")
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--trials", type=int, default=300, help="channels per p value")
    ap.add_argument("--general-bound", default="",
                    help="external bound as module:function (optional)")
    args = ap.parse_args()

    cfg = ExperimentConfig(
        experiment="fig4", n_trials=args.trials, seed=args.seed,
        p_list=(0.0, 0.05, 0.1, 0.2), oracle_restarts=8,
        general_bound=args.general_bound,
    )
    out = Path(args.out) / "fig4"
    write_dataset(run_experiment(cfg), out)
    print(f"fig4 -> {out}")


if __name__ == "__main__":
    main()
