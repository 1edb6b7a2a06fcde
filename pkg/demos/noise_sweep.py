"""Sweep mismatch noise and view counts on synthetic problems.

Generates seeded random ground truths, corrupts a fraction of the
pairwise matches, rectifies with clear(), and prints the mean edge-F1
per cell together with the raw corrupted input's F1 — showing how
redundancy (more views, higher observation ratio) drives recovery.

Run:  python3 demos/noise_sweep.py [--m 20] [--trials 10]
"""

from __future__ import annotations

import argparse

import numpy as np

from clearmatch import SynthConfig, monte_carlo


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--m", type=int, default=20, help="universe size")
    ap.add_argument("--trials", type=int, default=10)
    ap.add_argument("--seed", type=int, default=101)
    args = ap.parse_args()

    grid = [
        SynthConfig(args.m, views, 0.5, rate)
        for views in (4, 8, 12)
        for rate in (0.0, 0.15, 0.3, 0.45)
    ]
    results = monte_carlo(grid, trials=args.trials, base_seed=args.seed, threads=8)

    print(f"universe {args.m}, observation ratio 0.5, {args.trials} trials/cell")
    print(f"{'views':>5} {'rate':>5} {'input F1':>9} {'output F1':>9} {'consistent':>10}")
    for cell, cfg in enumerate(grid):
        rows = [r for r in results if r.cell_index == cell and hasattr(r, "report")]
        out_f1 = np.mean([r.report.f1 for r in rows])
        in_f1 = np.mean([r.input_f1 for r in rows])
        consistent = all(r.report.consistent for r in rows)
        print(f"{cfg.n_views:>5} {cfg.mismatch_rate:>5.2f} {in_f1:>9.3f} "
              f"{out_f1:>9.3f} {'yes' if consistent else 'NO':>10}")
    print("\nevery output is cycle consistent by construction; F1 shows how")
    print("much of the corruption the rectification undoes at each noise level.")


if __name__ == "__main__":
    main()
