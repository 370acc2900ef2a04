"""Counter-based random streams.

All randomness in this package is drawn from Philox4x64 keyed by a
``(seed, stream)`` pair of 64-bit integers.  Draw ``i`` of a stream is a pure
function of ``(seed, stream, i)``: any contiguous range of draws can be
regenerated at any time, in any order, without tracking generator state.
That is what makes lazily grown hash-coefficient vectors reproducible and
order-independent.

Conventions (documented in ``docs/randomness.md`` so other implementations
can reproduce the streams bit-exactly):

* word ``i`` is the ``i``-th 64-bit output of Philox4x64 with
  ``key = (seed, stream)`` and counter starting at zero;
* ``uniform(i) = ((word(i) >> 11) + 0.5) * 2**-53``, strictly inside (0, 1);
* ``normal(i)`` applies the standard-normal quantile to ``uniform(i)``;
* ``cauchy(i) = tan(pi * (uniform(i) - 1/2))``;
* a general p-stable draw ``i`` consumes words ``2i`` and ``2i + 1``
  (Chambers-Mallows-Stuck, symmetric case).

Stream ids are partitioned by purpose: ``stream = (purpose << 32) | index``.
"""

from __future__ import annotations

import numpy as np
from numpy.random import Philox

from .normal import normal_quantile

# Purpose tags for substream derivation.  Keeping every consumer in its own
# 32-bit purpose space means one master seed can feed hash coefficients,
# sample plans and data generation without overlap.
STREAM_HASH_COEFFS = 1
STREAM_HASH_PARAMS = 2
STREAM_SAMPLE_PLAN = 3
STREAM_PAIRS = 4
STREAM_DATASET = 5

_U64 = np.uint64
_MASK64 = _U64(0xFFFFFFFFFFFFFFFF)


def substream(purpose: int, index: int) -> int:
    """Pack a purpose tag and an index into a single stream id."""
    if not 0 <= index < 2**32:
        raise ValueError(f"substream index {index} outside [0, 2**32)")
    if not 0 <= purpose < 2**32:
        raise ValueError(f"purpose tag {purpose} outside [0, 2**32)")
    return (purpose << 32) | index


def raw_words(seed: int, stream: int, start: int, count: int) -> np.ndarray:
    """Return words ``start .. start + count`` of the (seed, stream) stream.

    Philox4x64 emits 64-bit words in blocks of four per counter increment;
    ``advance`` moves the counter in whole blocks, so the block containing
    ``start`` is entered and the intra-block offset discarded.
    """
    if count < 0:
        raise ValueError("count must be nonnegative")
    key = np.array([seed, stream], dtype=np.uint64)
    bg = Philox(key=key)
    if start >= 4:
        bg.advance(start // 4)
    skip = start % 4
    words = bg.random_raw(skip + count)
    return words[skip:] if skip else words


def uniforms(seed: int, stream: int, start: int, count: int) -> np.ndarray:
    """Uniform draws in the open interval (0, 1), one word each."""
    w = raw_words(seed, stream, start, count)
    return ((w >> _U64(11)).astype(np.float64) + 0.5) * 2.0**-53


def normals(seed: int, stream: int, start: int, count: int) -> np.ndarray:
    """Standard normal draws via the quantile transform, one word each."""
    return normal_quantile(uniforms(seed, stream, start, count))


def cauchys(seed: int, stream: int, start: int, count: int) -> np.ndarray:
    """Standard Cauchy draws, one word each."""
    return np.tan(np.pi * (uniforms(seed, stream, start, count) - 0.5))


def stables(p: float, seed: int, stream: int, start: int, count: int) -> np.ndarray:
    """Symmetric p-stable draws by Chambers-Mallows-Stuck, two words each.

    Uses the standard S(p, beta=0, scale=1) parameterization, under which
    p = 2 corresponds to a normal with variance 2 (not a standard normal);
    callers wanting exact normal or Cauchy streams should use
    :func:`normals` or :func:`cauchys` instead.
    """
    if not 0 < p <= 2:
        raise ValueError(f"stability index p={p} outside (0, 2]")
    u = uniforms(seed, stream, 2 * start, 2 * count)
    theta = np.pi * (u[0::2] - 0.5)          # Uniform(-pi/2, pi/2)
    w = -np.log(u[1::2])                     # Exp(1)
    if p == 1.0:
        return np.tan(theta)
    s = (np.sin(p * theta) / np.cos(theta) ** (1.0 / p)
         * (np.cos((1.0 - p) * theta) / w) ** ((1.0 - p) / p))
    return s


def splitmix64(z: np.ndarray | int) -> np.ndarray | np.uint64:
    """SplitMix64 finalizer; the mixing primitive behind Owen scrambling."""
    with np.errstate(over="ignore"):  # wraparound is the point
        z = (np.asarray(z, dtype=np.uint64) + _U64(0x9E3779B97F4A7C15)) & _MASK64
        z = ((z ^ (z >> _U64(30))) * _U64(0xBF58476D1CE4E5B9)) & _MASK64
        z = ((z ^ (z >> _U64(27))) * _U64(0x94D049BB133111EB)) & _MASK64
        return z ^ (z >> _U64(31))
