"""Observed vs theoretical hash collision rates for function pairs.

SimHash collides with probability 1 - arccos(cossim)/pi; the p = 2 bucket
hash with the collision integral of the folded normal. Hashing embedded
functions should reproduce those laws with the function-space similarity
in place of the vector similarity -- this script measures how closely, and
renders the scatter plots the acceptance suite checks numerically.
"""

import numpy as np

from funclsh.experiments import (ExperimentConfig, emit_svg_scatter,
                                 run_cosine_experiment, run_l2_experiment,
                                 write_collision_csv)

print("== SimHash over cosine similarity: 200 sine pairs, 1024 hash draws ==")
for method in ("chebyshev", "mc"):
    cfg = ExperimentConfig("cosine", method=method, seed=1)
    records = run_cosine_experiment(cfg)
    errs = np.array([abs(r.observed - r.theoretical) for r in records])
    print(f"  {method:9s}: mean |observed - theoretical| = {errs.mean():.4f}, "
          f"max = {errs.max():.4f}")
    csv = f"collision_cosine_{method}.csv"
    write_collision_csv(records, csv)
    emit_svg_scatter(csv, csv.replace(".csv", ".svg"))
    print(f"             wrote {csv} and the matching .svg")

print("\n== p-stable bucket hash over L^2 distance (r = 1) ==")
for method in ("chebyshev", "mc"):
    cfg = ExperimentConfig("l2", method=method, seed=1)
    records = run_l2_experiment(cfg)
    errs = np.array([abs(r.observed - r.theoretical) for r in records])
    print(f"  {method:9s}: mean |observed - theoretical| = {errs.mean():.4f}, "
          f"max = {errs.max():.4f}")

print("\n== a few individual pairs (chebyshev method) ==")
cfg = ExperimentConfig("l2", pairs=5, seed=1)
for rec in run_l2_experiment(cfg):
    print(f"  pair {rec.pair}: distance {rec.true_value:.3f}  "
          f"theoretical {rec.theoretical:.3f}  observed {rec.observed:.3f}  "
          f"(binomial se {rec.std_error:.3f})")

print("\nthe same runs are available from the command line:")
print("  funclsh experiment cosine --method mc --out cosine.csv --check")
print("  funclsh plot cosine.csv --out cosine.svg")
