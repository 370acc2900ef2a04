"""Embedding of L^2 functions into coefficient vectors via a cosine basis.

Under the change of variables x = m + h*cos(theta) (m midpoint, h
half-width of the domain), the Chebyshev-weighted inner product on [a, b]
becomes the plain L^2 inner product on theta in [0, pi], where
e_0 = 1/sqrt(pi), e_k = sqrt(2/pi)*cos(k*theta) is an orthonormal basis.
Sampling a function at the N Chebyshev points of the first kind and
applying a type-II DCT yields its first N coefficients against that basis,
so the Euclidean norm of the output approximates the function's norm under
the Chebyshev-weighted measure.

In Lebesgue mode the samples are pre-multiplied by sqrt(sin(theta_j)) *
sqrt(h), which turns the same transform into an (approximate) isometry for
the ordinary Lebesgue L^2 norm on [a, b].
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.fft import dct

from .errors import BasisMismatchError, NonFiniteError, TruncationError
from .functions import FunctionSource, evaluate


class JacobianMode(enum.Enum):
    """Which measure the embedded Euclidean norm approximates."""

    CHEBYSHEV_WEIGHTED = "chebyshev"
    LEBESGUE_JACOBIAN = "lebesgue"


@dataclass(frozen=True)
class OrthoEmbedConfig:
    """Truncation control for the cosine-basis embedding.

    ``fixed_terms`` pins the number of coefficients (the experiments use
    64); otherwise the term count is chosen adaptively as the smallest
    power of two <= ``max_terms`` whose trailing quarter of coefficients
    carries energy at most ``tail_tolerance**2``.
    """

    max_terms: int = 4096
    fixed_terms: int | None = None
    tail_tolerance: float = 1e-8
    jacobian_mode: JacobianMode = JacobianMode.CHEBYSHEV_WEIGHTED

    def __post_init__(self):
        if self.max_terms < 2:
            raise ValueError("max_terms must be at least 2")
        if self.fixed_terms is not None and not 1 <= self.fixed_terms <= self.max_terms:
            raise ValueError("fixed_terms must lie in [1, max_terms]")
        if self.tail_tolerance < 0:
            raise ValueError("tail_tolerance must be nonnegative")


@dataclass(frozen=True)
class BasisDescriptor:
    """Identifies the embedding space a coefficient vector lives in."""

    a: float
    b: float
    mode: JacobianMode


@dataclass(frozen=True)
class CoefficientVector:
    """Truncated coefficient expansion of a function.

    ``trailing_energy`` is the summed square of the trailing quarter of the
    stored coefficients; its square root stands in for the truncation error
    when no exact norm is available.
    """

    values: np.ndarray
    basis: BasisDescriptor
    trailing_energy: float

    def __len__(self) -> int:
        return len(self.values)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.values))


def chebyshev_nodes(a: float, b: float, n: int) -> np.ndarray:
    """The n Chebyshev points of the first kind mapped to [a, b]."""
    theta = np.pi * (np.arange(n) + 0.5) / n
    return 0.5 * (a + b) + 0.5 * (b - a) * np.cos(theta)


def _coefficients(samples: np.ndarray) -> np.ndarray:
    # Type-II DCT: y_k = 2 * sum_j s_j cos(k*pi*(j+1/2)/N).  Rescaled so the
    # output is coefficients against the orthonormal cosine basis on [0, pi].
    n = len(samples)
    y = dct(samples, type=2)
    c = (math.sqrt(math.pi / 2.0) / n) * y
    c[0] = math.sqrt(math.pi) / (2.0 * n) * y[0]
    return c


def _embed_at(f: FunctionSource, n: int, mode: JacobianMode) -> np.ndarray:
    dom = f.domain
    theta = np.pi * (np.arange(n) + 0.5) / n
    x = dom.midpoint + dom.halfwidth * np.cos(theta)
    s = evaluate(f, x)
    if mode is JacobianMode.LEBESGUE_JACOBIAN:
        s = s * np.sqrt(np.sin(theta)) * math.sqrt(dom.halfwidth)
    c = _coefficients(s)
    if not np.all(np.isfinite(c)):
        raise NonFiniteError("non-finite coefficient in cosine expansion")
    return c


def _trailing_energy(values: np.ndarray) -> float:
    start = (3 * len(values)) // 4
    tail = values[start:]
    return float(np.dot(tail, tail))


def embed_ortho(f: FunctionSource, cfg: OrthoEmbedConfig) -> CoefficientVector:
    """Expand ``f`` in the orthonormal cosine basis.

    Parameters
    ----------
    f : FunctionSource
        Function to embed; sampled at the Chebyshev points of its domain.
    cfg : OrthoEmbedConfig
        Term count and measure mode.

    Returns
    -------
    CoefficientVector
        Coefficients whose Euclidean distance approximates the L^2 distance
        under the configured measure.

    Raises
    ------
    TruncationError
        In adaptive mode, if no power of two up to ``max_terms`` meets the
        tail tolerance.
    """
    basis = BasisDescriptor(f.domain.a, f.domain.b, cfg.jacobian_mode)
    if cfg.fixed_terms is not None:
        values = _embed_at(f, cfg.fixed_terms, cfg.jacobian_mode)
        return CoefficientVector(values, basis, _trailing_energy(values))

    budget = cfg.tail_tolerance**2
    n = 2
    while n <= cfg.max_terms:
        values = _embed_at(f, n, cfg.jacobian_mode)
        tail = _trailing_energy(values)
        if tail <= budget:
            return CoefficientVector(values, basis, tail)
        n *= 2
    raise TruncationError(
        f"tail energy {tail:.3e} still above {budget:.3e} at max_terms={cfg.max_terms}")


def embedded_distance(u: CoefficientVector, v: CoefficientVector) -> float:
    """Euclidean distance after zero-padding the shorter vector."""
    if u.basis != v.basis:
        raise BasisMismatchError(f"bases differ: {u.basis} vs {v.basis}")
    n = max(len(u), len(v))
    a = np.zeros(n)
    a[: len(u)] = u.values
    a[: len(v)] -= v.values
    return float(np.linalg.norm(a))


def embedded_inner(u: CoefficientVector, v: CoefficientVector) -> float:
    """Inner product of the zero-padded coefficient vectors."""
    if u.basis != v.basis:
        raise BasisMismatchError(f"bases differ: {u.basis} vs {v.basis}")
    n = min(len(u), len(v))
    return float(np.dot(u.values[:n], v.values[:n]))


@dataclass(frozen=True)
class ErrorBound:
    """Truncation-error bound; ``clamped`` flags a negative radicand."""

    value: float
    clamped: bool = False

    def __float__(self) -> float:
        return self.value


def embedding_error_bound(u: CoefficientVector, known_norm: float | None = None) -> ErrorBound:
    """Bound on ||f - f_hat|| for the function behind ``u``.

    With ``known_norm`` (the function's exact norm under the embedding's
    measure) the bound is sqrt(known_norm^2 - ||u||^2), clamped at zero;
    otherwise the square root of the trailing-energy estimate is returned.
    """
    if known_norm is None:
        return ErrorBound(math.sqrt(max(u.trailing_energy, 0.0)))
    rad = known_norm**2 - float(np.dot(u.values, u.values))
    if rad < 0.0:
        return ErrorBound(0.0, clamped=True)
    return ErrorBound(math.sqrt(rad))
