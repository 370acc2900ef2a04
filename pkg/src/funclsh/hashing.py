"""Hash families on R^N: SimHash and the p-stable bucket hash.

Both families keep their projection coefficients as lazily grown streams:
coefficient i is a pure function of (seed, stream id, i), so a hash
function can extend itself on demand when it meets a longer input and
still produce exactly the hash a fully pre-generated function would.
Dot products run over only the input's length, which is what makes
variable-length coefficient vectors cheap to hash.

The theoretical side lives here too: closed-form SimHash collision
probability, the p-stable collision integral evaluated by adaptive Simpson
quadrature, and the perturbation bounds for hashing inputs known only up
to an epsilon of embedding error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import streams
from .errors import (EpsilonTooLargeError, NonFiniteError, RangeError,
                     UnsupportedPError, ZeroVectorError)

_INT64_LIMIT = float(2**63)


def _as_values(x) -> np.ndarray:
    vals = getattr(x, "values", x)
    return np.asarray(vals, dtype=np.float64)


def _draw_coefficients(p: float, seed: int, stream: int, start: int, count: int) -> np.ndarray:
    if p == 2.0:
        return streams.normals(seed, stream, start, count)
    if p == 1.0:
        return streams.cauchys(seed, stream, start, count)
    return streams.stables(p, seed, stream, start, count)


class _LazyStream:
    """Grow-only coefficient cache over a counter-based stream.

    Replacing the cached array is an atomic publish: concurrent readers may
    observe different lengths but never different values, because every
    entry is derived from its counter position alone.
    """

    def __init__(self, draw):
        self._draw = draw
        self._values = np.empty(0, dtype=np.float64)

    def first(self, n: int) -> np.ndarray:
        cur = self._values
        if n > len(cur):
            ext = self._draw(len(cur), n - len(cur))
            cur = np.concatenate([cur, ext])
            self._values = cur
        return cur[:n]

    @property
    def generated(self) -> int:
        return len(self._values)


class PStableHashFunction:
    """One draw of the p-stable bucket hash floor(alpha.x / r + b).

    For p = 2 the coefficients are standard normal, for p = 1 standard
    Cauchy, otherwise symmetric p-stable via Chambers-Mallows-Stuck.  The
    offset b is drawn from the function's parameter stream, so the whole
    function is reproducible from (p, r, seed, stream_id).
    """

    def __init__(self, p: float, r: float, seed: int, stream_id: int):
        if not 0.0 < p <= 2.0:
            raise ValueError(f"p={p} outside (0, 2]")
        if r <= 0.0:
            raise ValueError("width r must be positive")
        self.p = p
        self.r = r
        self.seed = seed
        self.stream_id = stream_id
        self.b = float(streams.uniforms(
            seed, streams.substream(streams.STREAM_HASH_PARAMS, stream_id), 0, 1)[0])
        coeff_stream = streams.substream(streams.STREAM_HASH_COEFFS, stream_id)
        self._coeffs = _LazyStream(
            lambda start, count: _draw_coefficients(p, seed, coeff_stream, start, count))

    def coefficients(self, n: int) -> np.ndarray:
        return self._coeffs.first(n)

    @property
    def generated(self) -> int:
        return self._coeffs.generated

    def __call__(self, x) -> int:
        return hash_pstable(self, x)


class SimHashFunction:
    """Random-hyperplane sign hash with a lazily grown normal vector."""

    def __init__(self, seed: int, stream_id: int):
        self.seed = seed
        self.stream_id = stream_id
        coeff_stream = streams.substream(streams.STREAM_HASH_COEFFS, stream_id)
        self._coeffs = _LazyStream(
            lambda start, count: streams.normals(seed, coeff_stream, start, count))

    def coefficients(self, n: int) -> np.ndarray:
        return self._coeffs.first(n)

    @property
    def generated(self) -> int:
        return self._coeffs.generated

    def __call__(self, x) -> int:
        return hash_simhash(self, x)


def hash_pstable(h: PStableHashFunction, x) -> int:
    """Bucket index floor(alpha.x / r + b), extending alpha as needed.

    Raises
    ------
    OverflowError
        If the pre-floor value leaves the signed 64-bit range, which
        signals a width r far too small for the data scale.
    """
    vals = _as_values(x)
    if not np.all(np.isfinite(vals)):
        raise NonFiniteError("hash input contains non-finite entries")
    alpha = h.coefficients(len(vals))
    v = float(np.dot(alpha, vals)) / h.r + h.b
    if not np.isfinite(v) or abs(v) >= _INT64_LIMIT:
        raise OverflowError(f"pre-floor hash value {v!r} exceeds 64-bit range; increase r")
    return int(math.floor(v))


def hash_simhash(h: SimHashFunction, x) -> int:
    """Sign bit of the projection onto the hyperplane normal (0 or 1)."""
    vals = _as_values(x)
    if not np.all(np.isfinite(vals)):
        raise NonFiniteError("hash input contains non-finite entries")
    if not np.any(vals):
        raise ZeroVectorError("SimHash undefined for the zero vector")
    alpha = h.coefficients(len(vals))
    return int(np.dot(alpha, vals) >= 0.0)


def pstable_family(n: int, p: float, r: float, seed: int,
                   first_stream: int = 0) -> list[PStableHashFunction]:
    """n independent p-stable hash functions on consecutive stream ids."""
    return [PStableHashFunction(p, r, seed, first_stream + j) for j in range(n)]


def simhash_family(n: int, seed: int, first_stream: int = 0) -> list[SimHashFunction]:
    return [SimHashFunction(seed, first_stream + j) for j in range(n)]


def _coefficient_matrix(funcs, dim: int) -> np.ndarray:
    return np.stack([h.coefficients(dim) for h in funcs])


def batch_hash_pstable(funcs: list[PStableHashFunction], xs: np.ndarray) -> np.ndarray:
    """Hash rows of ``xs`` under every function; shape (len(funcs), len(xs)).

    Vectorized equivalent of calling :func:`hash_pstable` pointwise; all
    functions must share p and r.
    """
    xs = np.asarray(xs, dtype=np.float64)
    a = _coefficient_matrix(funcs, xs.shape[1])
    r = funcs[0].r
    b = np.array([h.b for h in funcs])
    v = a @ xs.T / r + b[:, None]
    if not np.all(np.isfinite(v)) or np.any(np.abs(v) >= _INT64_LIMIT):
        raise OverflowError("pre-floor hash value exceeds 64-bit range; increase r")
    return np.floor(v).astype(np.int64)


def batch_hash_simhash(funcs: list[SimHashFunction], xs: np.ndarray) -> np.ndarray:
    """Sign bits for rows of ``xs``; shape (len(funcs), len(xs))."""
    xs = np.asarray(xs, dtype=np.float64)
    a = _coefficient_matrix(funcs, xs.shape[1])
    return (a @ xs.T >= 0.0).astype(np.uint8)


# ---------------------------------------------------------------------------
# Theoretical collision probabilities
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CollisionModel:
    """Parameters of the p-stable collision integral."""

    p: float
    r: float
    quadrature_resolution: int = 256

    def __post_init__(self):
        if self.r <= 0:
            raise ValueError("width r must be positive")
        if self.quadrature_resolution < 64:
            raise ValueError("quadrature resolution must be at least 64")


def _folded_density(p: float):
    # Density of |Z| for Z p-stable, known in closed form only for p in {1, 2}.
    if p == 2.0:
        k = math.sqrt(2.0 / math.pi)
        return lambda s: k * math.exp(-0.5 * s * s)
    if p == 1.0:
        return lambda s: 2.0 / (math.pi * (1.0 + s * s))
    raise UnsupportedPError(f"no folded density for p={p}; only p in {{1, 2}}")


def folded_density_sup(p: float) -> float:
    """sup_s f_p(s); both supported densities peak at zero."""
    if p == 2.0:
        return math.sqrt(2.0 / math.pi)
    if p == 1.0:
        return 2.0 / math.pi
    raise UnsupportedPError(f"no folded density for p={p}; only p in {{1, 2}}")


def _simpson_recurse(fn, a, b, fa, fm, fb, whole, tol, depth):
    m = 0.5 * (a + b)
    lm, rm = 0.5 * (a + m), 0.5 * (m + b)
    flm, frm = fn(lm), fn(rm)
    left = (m - a) / 6.0 * (fa + 4.0 * flm + fm)
    right = (b - m) / 6.0 * (fm + 4.0 * frm + fb)
    delta = left + right - whole
    if depth <= 0 or abs(delta) <= 15.0 * tol:
        return left + right + delta / 15.0
    return (_simpson_recurse(fn, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
            + _simpson_recurse(fn, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1))


def adaptive_simpson(fn, a: float, b: float, tol: float = 1e-12,
                     panels: int = 64, max_depth: int = 48) -> float:
    """Adaptive Simpson quadrature starting from ``panels`` uniform panels."""
    edges = np.linspace(a, b, panels + 1)
    tol_per_panel = tol / panels
    total = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        m = 0.5 * (lo + hi)
        fa, fm, fb = fn(lo), fn(m), fn(hi)
        whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb)
        total += _simpson_recurse(fn, lo, hi, fa, fm, fb, whole, tol_per_panel, max_depth)
    return total


def collision_prob_pstable(model: CollisionModel, c: float) -> float:
    """P[h(x) = h(y)] for inputs at l^p distance c.

    Evaluates int_0^{r/c} f_p(s) (1 - c*s/r) ds numerically, after the
    substitution s = (r/c) * t that keeps the integration interval [0, 1]
    for every c.  Monotone decreasing in c and increasing in r.
    """
    if not c > 0:
        raise RangeError("distance c must be positive")
    fp = _folded_density(model.p)
    u = model.r / c
    val = u * adaptive_simpson(lambda t: fp(u * t) * (1.0 - t), 0.0, 1.0,
                               tol=1e-12, panels=model.quadrature_resolution)
    return float(min(1.0, max(0.0, val)))


def collision_prob_simhash(cossim: float) -> float:
    """1 - arccos(cossim)/pi; inputs clamped within 1e-12 of [-1, 1]."""
    if abs(cossim) > 1.0 + 1e-12:
        raise RangeError(f"cosine similarity {cossim} outside [-1, 1]")
    return 1.0 - math.acos(min(1.0, max(-1.0, cossim))) / math.pi


def theorem1_bounds(model: CollisionModel, c: float, eps: float) -> tuple[float, float]:
    """Collision-probability bounds when inputs carry embedding error.

    For embedded inputs whose truncation errors are each at most eps/2, the
    collision probability of the underlying functions at distance c is
    bounded by P +/- min(linear, density-sup) correction terms, with P the
    exact-input collision probability.  Returns (lower, upper), clamped to
    [0, 1].

    Raises
    ------
    EpsilonTooLargeError
        If eps >= c, where the upper correction degenerates.
    """
    if eps < 0:
        raise RangeError("eps must be nonnegative")
    if eps >= c:
        raise EpsilonTooLargeError(f"eps={eps} must stay below c={c}")
    prob = collision_prob_pstable(model, c)
    sup = folded_density_sup(model.p)
    up = min(eps / (c - eps), eps * model.r * sup / (2.0 * (c - eps) ** 2))
    down = min(2.0 * eps / (c + eps), eps * model.r * sup / (2.0 * (c + eps) ** 2))
    return float(max(0.0, prob - down)), float(min(1.0, prob + up))
