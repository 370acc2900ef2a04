"""Embedding functions into R^N, two ways.

A function on an interval becomes a finite vector either through its
orthonormal cosine/Chebyshev expansion (exact to machine precision for
smooth functions at modest term counts) or through scaled point samples
(Monte Carlo). Both make the Euclidean geometry of the vector mirror the
L^2 geometry of the functions, which is what lets vector hash families
operate on functions at all.
"""

import numpy as np

import funclsh as fl

# two phase-shifted sines on [0, 1]; their L^2 geometry is known in closed
# form, so embeddings can be judged against the truth
cheb_dom = fl.IntervalDomain(0.0, 1.0, fl.Measure.CHEBYSHEV_WEIGHT)
f = fl.sine_source(1.0, 1.0, 0.0, cheb_dom)
g = fl.sine_source(1.0, 1.0, np.pi / 3, cheb_dom)

print("== orthonormal-basis embedding (Chebyshev-weighted measure) ==")
for terms in (8, 16, 32, 64):
    cfg = fl.OrthoEmbedConfig(fixed_terms=terms)
    u, v = fl.embed_ortho(f, cfg), fl.embed_ortho(g, cfg)
    dist = fl.embedded_distance(u, v)
    oracle = fl.l2_distance_oracle(f, g)
    print(f"  {terms:3d} terms: distance {dist:.12f}  "
          f"(oracle {oracle:.12f}, error {abs(dist - oracle):.2e}, "
          f"tail energy {u.trailing_energy:.2e})")

print("\n== adaptive truncation picks the term count itself ==")
adaptive = fl.embed_ortho(f, fl.OrthoEmbedConfig(max_terms=1024, tail_tolerance=1e-10))
print(f"  kept {len(adaptive)} coefficients, tail energy {adaptive.trailing_energy:.2e}")

print("\n== Monte Carlo embedding (Lebesgue measure) ==")
leb_f = fl.sine_source(1.0, 1.0, 0.0)
leb_g = fl.sine_source(1.0, 1.0, np.pi / 3)
oracle = fl.l2_distance_oracle(leb_f, leb_g)
for n in (64, 512, 4096):
    plan = fl.make_sample_plan(leb_f.domain, fl.McEmbedConfig(n, seed=42))
    est = fl.lp_distance(fl.embed_mc(leb_f, plan), fl.embed_mc(leb_g, plan))
    var = fl.estimate_embedding_variance(leb_f, leb_g, plan)
    print(f"  {n:5d} samples: distance {est:.6f}  (oracle {oracle:.6f}, "
          f"predicted std of squared estimate {np.sqrt(var):.4f})")

print("\n== the embedding also preserves inner products ==")
cfg = fl.OrthoEmbedConfig(fixed_terms=64)
u, v = fl.embed_ortho(f, cfg), fl.embed_ortho(g, cfg)
print(f"  <f, g> embedded: {fl.embedded_inner(u, v):.12f}")
print(f"  <f, g> oracle:   {fl.l2_inner_oracle(f, g):.12f}")
