"""Hashing probability distributions on their Wasserstein distance.

For distributions on the line, W^p is the L^p distance between quantile
functions, so a distribution can be hashed by embedding its inverse CDF
(clipped away from the divergent endpoints) and applying an ordinary
vector hash. Gaussians make a good demonstration because their W^2 has a
closed form to compare against.
"""

import numpy as np

import funclsh as fl
from funclsh.experiments import ExperimentConfig, run_wasserstein_experiment

g1 = fl.Gaussian(0.0, 1.0)
g2 = fl.Gaussian(1.0, 2.0)

print("== W^2 between N(0,1) and N(1,2) ==")
exact = fl.wasserstein_gaussian_exact(g1, g2)
print(f"  closed form:                 {exact:.6f}")

ortho = fl.OrthoEmbedConfig(fixed_terms=64, jacobian_mode=fl.JacobianMode.LEBESGUE_JACOBIAN)
print(f"  64-term basis embedding:     {fl.wasserstein_via_embedding(g1, g2, method=ortho):.6f}")
for n in (64, 1024, 4096):
    mc = fl.McEmbedConfig(n, seed=7)
    print(f"  {n:5d}-sample MC embedding:   "
          f"{fl.wasserstein_via_embedding(g1, g2, method=mc):.6f}")
sobol = fl.McEmbedConfig(1024, sampler=fl.Sampler.SOBOL, seed=7)
print(f"  1024-point Sobol embedding:  {fl.wasserstein_via_embedding(g1, g2, method=sobol):.6f}")

print("\n== empirical distributions work the same way ==")
rng = np.random.default_rng(0)
e1 = fl.Empirical(rng.normal(0.0, 1.0, 5000))
e2 = fl.Empirical(rng.normal(1.0, 2.0, 3000))
print(f"  exact (merged-grid sweep):   "
      f"{fl.wasserstein_empirical_exact(e1, e2, 2.0):.6f}")
print(f"  via MC embedding:            "
      f"{fl.wasserstein_via_embedding(e1, e2, method=fl.McEmbedConfig(2048, seed=9)):.6f}")

print("\n== collision rates track the W^2 law (experiment 3) ==")
for method in ("chebyshev", "mc"):
    cfg = ExperimentConfig("wasserstein", method=method, seed=1)
    records = run_wasserstein_experiment(cfg)
    errs = np.array([abs(r.observed - r.theoretical) for r in records])
    print(f"  {method:9s}: mean |observed - theoretical| = {errs.mean():.4f} "
          f"over {len(records)} Gaussian pairs")

print("\nnote: quantiles are hashed on [1e-3, 1 - 1e-3]; the clip removes the")
print("divergent tails and costs only a small, bounded bias in the estimate.")
