"""(Quasi-)Monte Carlo embedding of L^p functions into R^N.

Sampling a function at N points drawn from the normalized domain measure
and scaling by (V/N)^(1/p), with V the measure's total mass, gives a vector
whose l^p norm estimates the function's L^p norm.  Plans can draw i.i.d.
points or a low-discrepancy sequence; in one dimension the Sobol sequence
is the van der Corput base-2 radical inverse, optionally Owen-scrambled.

The radical-inverse and scrambling conventions are fixed bit-exactly in
``docs/randomness.md``: point i (starting at i = 1; the zero point is
skipped) reverses the low 32 bits of i, and scrambling flips digit d based
on a SplitMix64 hash of the seed and the d preceding digits.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from . import streams
from .errors import BasisMismatchError, NonFiniteError, UnsupportedMeasureError
from .functions import FunctionSource, IntervalDomain, Measure, evaluate

_U64 = np.uint64
_VDC_BITS = 32


class Sampler(enum.Enum):
    IID_UNIFORM = "iid"
    SOBOL = "sobol"


@dataclass(frozen=True)
class McEmbedConfig:
    """Sample count, norm exponent and sampling scheme for one plan."""

    sample_count: int
    p: float = 2.0
    sampler: Sampler = Sampler.IID_UNIFORM
    seed: int = 0
    scramble: bool = False

    def __post_init__(self):
        if self.sample_count < 1:
            raise ValueError("sample_count must be positive")
        if not 0.0 < self.p <= 2.0:
            raise ValueError(f"p={self.p} outside (0, 2]")


@dataclass(frozen=True)
class SamplePlan:
    """Frozen abscissae shared by every function hashed under one family."""

    domain: IntervalDomain
    abscissae: np.ndarray
    scale: float
    config: McEmbedConfig

    def __post_init__(self):
        x = self.abscissae
        if np.any(x <= self.domain.a) or np.any(x >= self.domain.b):
            raise ValueError("abscissae must lie strictly inside the domain")
        if not self.scale > 0:
            raise ValueError("scale must be positive")


def radical_inverse(start_index: int, count: int) -> np.ndarray:
    """Base-2 radical inverse of indices start_index .. start_index+count-1.

    Exact dyadic values: 1 -> 0.5, 2 -> 0.25, 3 -> 0.75, 4 -> 0.125, ...
    """
    if start_index < 1:
        raise ValueError("sequence starts at index 1")
    i = np.arange(start_index, start_index + count, dtype=np.uint64)
    return _bit_reverse(i).astype(np.float64) / 2.0**_VDC_BITS


def _bit_reverse(i: np.ndarray) -> np.ndarray:
    x = i & _U64(0xFFFFFFFF)
    x = ((x & _U64(0x55555555)) << _U64(1)) | ((x & _U64(0xAAAAAAAA)) >> _U64(1))
    x = ((x & _U64(0x33333333)) << _U64(2)) | ((x & _U64(0xCCCCCCCC)) >> _U64(2))
    x = ((x & _U64(0x0F0F0F0F)) << _U64(4)) | ((x & _U64(0xF0F0F0F0)) >> _U64(4))
    x = ((x & _U64(0x00FF00FF)) << _U64(8)) | ((x & _U64(0xFF00FF00)) >> _U64(8))
    x = ((x & _U64(0x0000FFFF)) << _U64(16)) | ((x & _U64(0xFFFF0000)) >> _U64(16))
    return x


def _owen_scramble(rev: np.ndarray, seed: int) -> np.ndarray:
    # Nested digit scrambling: the flip applied to digit d depends on the
    # original d preceding digits, so points sharing a prefix share flips.
    out = rev.copy()
    sd = streams.splitmix64(np.uint64(seed & 0xFFFFFFFFFFFFFFFF))
    for d in range(_VDC_BITS):
        prefix = rev >> _U64(_VDC_BITS - d)
        h = streams.splitmix64(sd ^ streams.splitmix64((prefix << _U64(6)) | _U64(d)))
        out ^= (h & _U64(1)) << _U64(_VDC_BITS - 1 - d)
    return out


def sobol_sequence(count: int, seed: int = 0, scramble: bool = False) -> np.ndarray:
    """First ``count`` points of the 1-D Sobol (van der Corput) sequence.

    Unscrambled points are the exact dyadic radical inverses; scrambled
    points get a half-ulp offset so they stay strictly inside (0, 1).
    """
    i = np.arange(1, count + 1, dtype=np.uint64)
    rev = _bit_reverse(i)
    if scramble:
        rev = _owen_scramble(rev, seed)
        return (rev.astype(np.float64) + 0.5) / 2.0**_VDC_BITS
    return rev.astype(np.float64) / 2.0**_VDC_BITS


def _from_unit_interval(u: np.ndarray, domain: IntervalDomain) -> np.ndarray:
    # Inverse transform of the normalized measure mu/V.
    if domain.measure is Measure.LEBESGUE:
        return domain.a + (domain.b - domain.a) * u
    if domain.measure is Measure.CHEBYSHEV_WEIGHT:
        return domain.midpoint + domain.halfwidth * np.cos(np.pi * u)
    raise UnsupportedMeasureError(f"no inverse transform for {domain.measure}")


def make_sample_plan(domain: IntervalDomain, cfg: McEmbedConfig) -> SamplePlan:
    """Draw the plan's abscissae; deterministic given (domain, cfg)."""
    n = cfg.sample_count
    if cfg.sampler is Sampler.IID_UNIFORM:
        u = streams.uniforms(cfg.seed, streams.substream(streams.STREAM_SAMPLE_PLAN, 0), 0, n)
    elif cfg.sampler is Sampler.SOBOL:
        u = sobol_sequence(n, seed=cfg.seed, scramble=cfg.scramble)
    else:  # pragma: no cover - enum is closed
        raise ValueError(f"unknown sampler {cfg.sampler}")
    x = _from_unit_interval(u, domain)
    scale = (domain.volume / n) ** (1.0 / cfg.p)
    return SamplePlan(domain, x, float(scale), cfg)


@dataclass(frozen=True)
class EmbeddingVector:
    """Scaled point samples of one function under a shared plan."""

    values: np.ndarray
    plan: SamplePlan
    p: float

    def __len__(self) -> int:
        return len(self.values)


def embed_mc(f: FunctionSource, plan: SamplePlan, p: float | None = None) -> EmbeddingVector:
    """Sample ``f`` on the plan and scale by (V/N)^(1/p).

    ``p`` defaults to the plan's configured exponent; the l^p distance of
    two embeddings under the same plan estimates the L^p distance of the
    functions under the plan's domain measure.
    """
    if p is None:
        p = plan.config.p
    try:
        samples = evaluate(f, plan.abscissae)
    except NonFiniteError:
        vals = np.asarray(f.evaluator(plan.abscissae), dtype=np.float64)
        bad = plan.abscissae[~np.isfinite(vals)][0]
        raise NonFiniteError(f"non-finite sample at abscissa x={bad!r}") from None
    n = plan.config.sample_count
    scale = (plan.domain.volume / n) ** (1.0 / p)
    return EmbeddingVector(scale * samples, plan, p)


def lp_distance(u: EmbeddingVector, v: EmbeddingVector) -> float:
    """l^p distance of two embeddings sharing a plan (quasi-norm for p < 1)."""
    if u.plan is not v.plan and (u.plan.config != v.plan.config
                                 or u.plan.domain != v.plan.domain):
        raise BasisMismatchError("embeddings come from different sample plans")
    if u.p != v.p:
        raise BasisMismatchError(f"exponents differ: {u.p} vs {v.p}")
    d = np.abs(u.values - v.values)
    return float(np.sum(d**u.p) ** (1.0 / u.p))


def estimate_embedding_variance(f: FunctionSource, g: FunctionSource,
                                plan: SamplePlan, p: float | None = None) -> float:
    """Plug-in variance of ||T(f) - T(g)||_p^p.

    The p-th power of the embedded distance is a sample mean scaled by V,
    so its variance is (V^2 / N) * Var(|f(x) - g(x)|^p); the population
    variance is estimated from the plan's own samples (ddof = 1).
    """
    if p is None:
        p = plan.config.p
    d = np.abs(evaluate(f, plan.abscissae) - evaluate(g, plan.abscissae)) ** p
    n = len(d)
    if n < 2:
        return 0.0
    return float(plan.domain.volume**2 / n * np.var(d, ddof=1))
