"""Collision-rate experiments, convergence studies, CSV and SVG output.

Three experiments compare observed hash-collision frequencies against the
theoretical collision probabilities evaluated at exactly known similarity
values: SimHash on the cosine similarity of random sine pairs, the p = 2
bucket hash on their L^2 distance, and the same hash on the 2-Wasserstein
distance between random Gaussians (hashed through their inverse CDFs).
A fourth mode sweeps the Monte Carlo sample count to measure embedding
convergence rates.

Everything is deterministic in the master seed: hash function j draws from
stream j, pair i draws its parameters from pair-stream i, so reruns emit
byte-identical CSV files and per-pair work could be farmed out in any
order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import streams
from .errors import ParseError
from .functions import (FunctionSource, IntervalDomain, Measure,
                        cosine_similarity_oracle, l2_distance_oracle, sine_source)
from .hashing import (CollisionModel, batch_hash_pstable, batch_hash_simhash,
                      collision_prob_pstable, collision_prob_simhash,
                      pstable_family, simhash_family)
from .montecarlo import McEmbedConfig, Sampler, embed_mc, lp_distance, make_sample_plan
from .ortho import JacobianMode, OrthoEmbedConfig, embed_ortho
from .wasserstein import Gaussian, QuantileClip, quantile_source, wasserstein_gaussian_exact

EXPERIMENTS = ("cosine", "l2", "wasserstein", "convergence")
METHODS = ("chebyshev", "mc", "sobol")

# Acceptance tolerances on mean / max |observed - theoretical| per pair.
CHECK_TOLERANCES = {
    "cosine": (0.03, 0.08),
    "l2": (0.03, 0.08),
    "wasserstein": (0.05, None),
}
CONVERGENCE_SLOPE_IID = (-0.65, -0.35)
CONVERGENCE_SLOPE_SOBOL_MAX = -0.8
CONVERGENCE_COUNTS = tuple(2**k for k in range(4, 13))


@dataclass(frozen=True)
class ExperimentConfig:
    """Knobs for one experiment run; defaults mirror the figure setups."""

    experiment: str
    n_hashes: int = 1024
    dim: int = 64
    pairs: int = 200
    method: str = "chebyshev"
    r: float = 1.0
    clip: float = 1e-3
    seed: int = 1
    out: str | None = None

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise ValueError(f"unknown experiment {self.experiment!r}")
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}")
        if min(self.n_hashes, self.dim, self.pairs) < 1:
            raise ValueError("n_hashes, dim and pairs must be positive")


@dataclass(frozen=True)
class CollisionRecord:
    """One scatter point: a pair's oracle value vs its observed rate."""

    pair: int
    true_value: float
    theoretical: float
    observed: float
    std_error: float
    embedded_value: float


@dataclass(frozen=True)
class ConvergenceRecord:
    sample_count: int
    method: str
    mean_abs_error: float


def _pair_uniforms(seed: int, pair: int, count: int) -> np.ndarray:
    return streams.uniforms(seed, streams.substream(streams.STREAM_PAIRS, pair), 0, count)


def _embed_functions(sources: list[FunctionSource], cfg: ExperimentConfig,
                     domain: IntervalDomain) -> np.ndarray:
    """Stack embeddings of all sources into an (n, dim) matrix."""
    if cfg.method == "chebyshev":
        mode = (JacobianMode.LEBESGUE_JACOBIAN if cfg.experiment == "wasserstein"
                else JacobianMode.CHEBYSHEV_WEIGHTED)
        ortho_cfg = OrthoEmbedConfig(max_terms=max(cfg.dim, 2), fixed_terms=cfg.dim,
                                     jacobian_mode=mode)
        return np.stack([embed_ortho(f, ortho_cfg).values for f in sources])
    sampler = Sampler.IID_UNIFORM if cfg.method == "mc" else Sampler.SOBOL
    mc_cfg = McEmbedConfig(cfg.dim, p=2.0, sampler=sampler, seed=cfg.seed)
    plan = make_sample_plan(domain, mc_cfg)
    return np.stack([embed_mc(f, plan).values for f in sources])


def _observed_rates(hashes: np.ndarray) -> np.ndarray:
    """Per-pair collision frequency; column 2i pairs with column 2i+1."""
    return np.mean(hashes[:, 0::2] == hashes[:, 1::2], axis=0)


def _std_error(freq: float, n_hashes: int) -> float:
    return math.sqrt(freq * (1.0 - freq) / n_hashes)


def _embedded_cosine(u: np.ndarray, v: np.ndarray) -> float:
    nu, nv = np.linalg.norm(u), np.linalg.norm(v)
    if nu == 0.0 or nv == 0.0:
        return 0.0
    return float(np.clip(np.dot(u, v) / (nu * nv), -1.0, 1.0))


def run_cosine_experiment(cfg: ExperimentConfig) -> list[CollisionRecord]:
    """SimHash collision rates for random sine pairs vs the arccos law."""
    measure = Measure.CHEBYSHEV_WEIGHT if cfg.method == "chebyshev" else Measure.LEBESGUE
    domain = IntervalDomain(0.0, 1.0, measure)
    sources = []
    for i in range(cfg.pairs):
        d1, d2 = 2.0 * np.pi * _pair_uniforms(cfg.seed, i, 2)
        sources.append(sine_source(1.0, 1.0, d1, domain))
        sources.append(sine_source(1.0, 1.0, d2, domain))
    vectors = _embed_functions(sources, cfg, domain)
    family = simhash_family(cfg.n_hashes, cfg.seed)
    observed = _observed_rates(batch_hash_simhash(family, vectors))

    records = []
    for i in range(cfg.pairs):
        f, g = sources[2 * i], sources[2 * i + 1]
        cs = cosine_similarity_oracle(f, g)
        records.append(CollisionRecord(
            pair=i,
            true_value=cs,
            theoretical=collision_prob_simhash(cs),
            observed=float(observed[i]),
            std_error=_std_error(float(observed[i]), cfg.n_hashes),
            embedded_value=_embedded_cosine(vectors[2 * i], vectors[2 * i + 1]),
        ))
    return records


def _pstable_records(cfg: ExperimentConfig, vectors,
                     true_distances) -> list[CollisionRecord]:
    family = pstable_family(cfg.n_hashes, 2.0, cfg.r, cfg.seed)
    observed = _observed_rates(batch_hash_pstable(family, vectors))
    model = CollisionModel(2.0, cfg.r)
    records = []
    for i in range(cfg.pairs):
        c = true_distances[i]
        theoretical = 1.0 if c < 1e-12 else collision_prob_pstable(model, c)
        emb = float(np.linalg.norm(vectors[2 * i] - vectors[2 * i + 1]))
        records.append(CollisionRecord(
            pair=i,
            true_value=c,
            theoretical=theoretical,
            observed=float(observed[i]),
            std_error=_std_error(float(observed[i]), cfg.n_hashes),
            embedded_value=emb,
        ))
    return records


def run_l2_experiment(cfg: ExperimentConfig) -> list[CollisionRecord]:
    """p = 2 bucket-hash collision rates for random sine pairs.

    The oracle distance is computed under the measure the method embeds
    against (Chebyshev weight for the basis route, Lebesgue for the Monte
    Carlo routes), so observed and theoretical live on the same scale.
    """
    measure = Measure.CHEBYSHEV_WEIGHT if cfg.method == "chebyshev" else Measure.LEBESGUE
    domain = IntervalDomain(0.0, 1.0, measure)
    sources = []
    for i in range(cfg.pairs):
        d1, d2 = 2.0 * np.pi * _pair_uniforms(cfg.seed, i, 2)
        sources.append(sine_source(1.0, 1.0, d1, domain))
        sources.append(sine_source(1.0, 1.0, d2, domain))
    vectors = _embed_functions(sources, cfg, domain)
    dists = [l2_distance_oracle(sources[2 * i], sources[2 * i + 1])
             for i in range(cfg.pairs)]
    return _pstable_records(cfg, vectors, dists)


def run_wasserstein_experiment(cfg: ExperimentConfig) -> list[CollisionRecord]:
    """W^2 hashing of random Gaussian pairs through their inverse CDFs.

    Means are Uniform[-1, 1], variances Uniform[0, 1]; the theoretical
    collision curve is evaluated at the closed-form Gaussian W^2, while the
    hash sees the quantile functions clipped to [clip, 1 - clip].
    """
    clip = QuantileClip(cfg.clip)
    domain = IntervalDomain(clip.delta, 1.0 - clip.delta)
    sources, dists = [], []
    for i in range(cfg.pairs):
        u = _pair_uniforms(cfg.seed, i, 4)
        g1 = Gaussian(2.0 * u[0] - 1.0, math.sqrt(u[1]))
        g2 = Gaussian(2.0 * u[2] - 1.0, math.sqrt(u[3]))
        sources.append(quantile_source(g1, clip))
        sources.append(quantile_source(g2, clip))
        dists.append(wasserstein_gaussian_exact(g1, g2))
    vectors = _embed_functions(sources, cfg, domain)
    return _pstable_records(cfg, vectors, dists)


def run_convergence_study(cfg: ExperimentConfig) -> tuple[list[ConvergenceRecord], dict[str, float]]:
    """Mean embedding error vs sample count for i.i.d. and Sobol sampling.

    For a fixed sine pair, sweeps N over powers of two and averages
    |embedded distance - oracle distance| over ``cfg.pairs`` independent
    plans per N (the Sobol plans differ by their scrambling seed).  Returns
    the per-N records plus the fitted log-log slope per method.
    """
    domain = IntervalDomain(0.0, 1.0)
    f = sine_source(1.0, 1.0, 0.0)
    g = sine_source(1.0, 1.0, math.pi / 2.0)
    oracle = l2_distance_oracle(f, g)
    n_seeds = cfg.pairs
    records, slopes = [], {}
    for method, sampler, scramble in (("mc", Sampler.IID_UNIFORM, False),
                                      ("sobol", Sampler.SOBOL, True)):
        errors = []
        for n in CONVERGENCE_COUNTS:
            errs = np.empty(n_seeds)
            for s in range(n_seeds):
                mc_cfg = McEmbedConfig(n, 2.0, sampler, seed=cfg.seed + s, scramble=scramble)
                plan = make_sample_plan(domain, mc_cfg)
                est = lp_distance(embed_mc(f, plan), embed_mc(g, plan))
                errs[s] = abs(est - oracle)
            mean_err = float(np.mean(errs))
            errors.append(mean_err)
            records.append(ConvergenceRecord(n, method, mean_err))
        slope = float(np.polyfit(np.log(CONVERGENCE_COUNTS), np.log(errors), 1)[0])
        slopes[method] = slope
    return records, slopes


# ---------------------------------------------------------------------------
# CSV + SVG output
# ---------------------------------------------------------------------------

COLLISION_HEADER = "pair,true_value,theoretical,observed,std_error,embedded_value"


def write_collision_csv(records: list[CollisionRecord], path) -> None:
    lines = [COLLISION_HEADER]
    for rec in records:
        lines.append(",".join([str(rec.pair)] + [
            repr(float(v)) for v in (rec.true_value, rec.theoretical, rec.observed,
                                     rec.std_error, rec.embedded_value)]))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_collision_csv(path) -> list[CollisionRecord]:
    lines = [ln for ln in Path(path).read_text(encoding="utf-8").splitlines()
             if ln.strip() and not ln.startswith("#")]
    if not lines or lines[0] != COLLISION_HEADER:
        raise ParseError(f"expected header {COLLISION_HEADER!r}", 1)
    records = []
    for lineno, ln in enumerate(lines[1:], start=2):
        parts = ln.split(",")
        if len(parts) != 6:
            raise ParseError("expected 6 columns", lineno)
        try:
            records.append(CollisionRecord(int(parts[0]), *map(float, parts[1:])))
        except ValueError as exc:
            raise ParseError(str(exc), lineno) from None
    return records


def write_convergence_csv(records: list[ConvergenceRecord],
                          slopes: dict[str, float], path) -> None:
    lines = ["sample_count,method,mean_abs_error"]
    for rec in records:
        lines.append(f"{rec.sample_count},{rec.method},{rec.mean_abs_error!r}")
    for method in sorted(slopes):
        lines.append(f"# slope,{method},{slopes[method]!r}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


_SVG_SIZE = 520
_SVG_MARGIN = 60


def _svg_xy(theo: float, obs: float) -> tuple[float, float]:
    span = _SVG_SIZE - 2 * _SVG_MARGIN
    return (_SVG_MARGIN + span * theo, _SVG_SIZE - _SVG_MARGIN - span * obs)


def emit_svg_scatter(csv_path, out_path) -> None:
    """Standalone SVG: observed vs theoretical with the y = x reference.

    The CSV must carry ``theoretical`` and ``observed`` columns (any
    collision CSV written by this module qualifies).
    """
    lines = [ln for ln in Path(csv_path).read_text(encoding="utf-8").splitlines()
             if ln.strip() and not ln.startswith("#")]
    if not lines:
        raise ParseError("empty CSV: missing header", 1)
    header = lines[0].split(",")
    try:
        theo_col = header.index("theoretical")
        obs_col = header.index("observed")
    except ValueError:
        raise ParseError("CSV needs `theoretical` and `observed` columns", 1) from None
    points = []
    for lineno, ln in enumerate(lines[1:], start=2):
        parts = ln.split(",")
        if len(parts) <= max(theo_col, obs_col):
            raise ParseError("short row", lineno)
        try:
            points.append((float(parts[theo_col]), float(parts[obs_col])))
        except ValueError as exc:
            raise ParseError(str(exc), lineno) from None

    span = _SVG_SIZE - 2 * _SVG_MARGIN
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_SVG_SIZE}" '
        f'height="{_SVG_SIZE}" viewBox="0 0 {_SVG_SIZE} {_SVG_SIZE}">',
        f'<rect width="{_SVG_SIZE}" height="{_SVG_SIZE}" fill="white"/>',
    ]
    x0, y0 = _svg_xy(0.0, 0.0)
    x1, y1 = _svg_xy(1.0, 1.0)
    parts.append(f'<line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y0}" stroke="black"/>')
    parts.append(f'<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}" stroke="black"/>')
    for t in (0.0, 0.25, 0.5, 0.75, 1.0):
        tx, ty = _svg_xy(t, t)
        parts.append(f'<line x1="{tx}" y1="{y0}" x2="{tx}" y2="{y0 + 5}" stroke="black"/>')
        parts.append(f'<text x="{tx}" y="{y0 + 20}" font-size="11" '
                     f'text-anchor="middle">{t:g}</text>')
        parts.append(f'<line x1="{x0 - 5}" y1="{ty}" x2="{x0}" y2="{ty}" stroke="black"/>')
        parts.append(f'<text x="{x0 - 8}" y="{ty + 4}" font-size="11" '
                     f'text-anchor="end">{t:g}</text>')
    parts.append(f'<line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y1}" '
                 f'stroke="gray" stroke-dasharray="4,3"/>')
    parts.append(f'<text x="{(x0 + x1) / 2}" y="{_SVG_SIZE - 12}" font-size="13" '
                 f'text-anchor="middle">theoretical collision probability</text>')
    parts.append(f'<text x="14" y="{(y0 + y1) / 2}" font-size="13" text-anchor="middle" '
                 f'transform="rotate(-90 14 {(y0 + y1) / 2})">observed collision frequency</text>')
    for theo, obs in points:
        px, py = _svg_xy(theo, obs)
        parts.append(f'<circle cx="{px:.2f}" cy="{py:.2f}" r="3" '
                     f'fill="steelblue" fill-opacity="0.6"/>')
    parts.append("</svg>")
    Path(out_path).write_text("\n".join(parts) + "\n", encoding="utf-8")


# ---------------------------------------------------------------------------
# Check mode
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CheckResult:
    ok: bool
    detail: str


def check_collision_records(records: list[CollisionRecord], experiment: str) -> CheckResult:
    """Gate mean/max |observed - theoretical| against the run's tolerance."""
    mean_tol, max_tol = CHECK_TOLERANCES[experiment]
    errs = np.array([abs(r.observed - r.theoretical) for r in records])
    ok = errs.mean() <= mean_tol and (max_tol is None or errs.max() <= max_tol)
    detail = (f"mean |observed-theoretical| = {errs.mean():.4f} (tol {mean_tol}), "
              f"max = {errs.max():.4f}" + ("" if max_tol is None else f" (tol {max_tol})"))
    return CheckResult(bool(ok), detail)


def check_convergence(slopes: dict[str, float]) -> CheckResult:
    lo, hi = CONVERGENCE_SLOPE_IID
    ok = (lo <= slopes["mc"] <= hi) and slopes["sobol"] <= CONVERGENCE_SLOPE_SOBOL_MAX
    detail = (f"iid slope = {slopes['mc']:.3f} (want [{lo}, {hi}]), "
              f"sobol slope = {slopes['sobol']:.3f} (want <= {CONVERGENCE_SLOPE_SOBOL_MAX})")
    return CheckResult(bool(ok), detail)


def run_experiment(cfg: ExperimentConfig) -> CheckResult:
    """Run one experiment end to end, writing CSV when ``cfg.out`` is set."""
    if cfg.experiment == "convergence":
        records, slopes = run_convergence_study(cfg)
        if cfg.out:
            write_convergence_csv(records, slopes, cfg.out)
        return check_convergence(slopes)
    runner = {"cosine": run_cosine_experiment,
              "l2": run_l2_experiment,
              "wasserstein": run_wasserstein_experiment}[cfg.experiment]
    records = runner(cfg)
    if cfg.out:
        write_collision_csv(records, cfg.out)
    return check_collision_records(records, cfg.experiment)
