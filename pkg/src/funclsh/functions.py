"""Evaluable functions on interval domains, and their quadrature oracles.

A :class:`FunctionSource` bundles an interval domain (with its measure) and
an evaluator.  Evaluators are plain callables on numpy arrays; the stock
ones are phase-shifted sines, tabulated samples with linear interpolation,
and arbitrary user callbacks.  Quantile evaluators for probability
distributions live in :mod:`funclsh.wasserstein`.

The quadrature oracles here (inner products, norms, cosine similarity) are
the package's ground truth: composite Gauss-Legendre under Lebesgue measure
and Gauss-Chebyshev under the Chebyshev weight, at node counts far beyond
anything the embeddings use.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

import numpy as np

from .errors import DomainError, DuplicateIdError, NonFiniteError, ParseError, ZeroNormError

DEFAULT_ORACLE_NODES = 4096
_GL_PANEL_ORDER = 16


class Measure(enum.Enum):
    """Measure attached to an interval domain."""

    LEBESGUE = "lebesgue"
    CHEBYSHEV_WEIGHT = "chebyshev"


@dataclass(frozen=True)
class IntervalDomain:
    """Interval [a, b] carrying a measure.

    Under the Chebyshev weight the measure is dx / sqrt(h^2 - (x - m)^2)
    with m the midpoint and h the half-width, so the total mass is pi for
    every interval; under Lebesgue it is b - a.
    """

    a: float
    b: float
    measure: Measure = Measure.LEBESGUE

    def __post_init__(self):
        if not (np.isfinite(self.a) and np.isfinite(self.b) and self.b > self.a):
            raise ValueError(f"invalid interval [{self.a}, {self.b}]")

    @property
    def volume(self) -> float:
        if self.measure is Measure.CHEBYSHEV_WEIGHT:
            return float(np.pi)
        return self.b - self.a

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.a + self.b)

    @property
    def halfwidth(self) -> float:
        return 0.5 * (self.b - self.a)


@dataclass(frozen=True)
class ParametricSine:
    """amplitude * sin(2*pi*frequency*x + phase)."""

    amplitude: float
    frequency: float
    phase: float

    def __call__(self, x):
        return self.amplitude * np.sin(2.0 * np.pi * self.frequency * np.asarray(x) + self.phase)


@dataclass(frozen=True)
class TabulatedSamples:
    """Piecewise-linear interpolant through (abscissae, ordinates)."""

    abscissae: np.ndarray
    ordinates: np.ndarray

    def __post_init__(self):
        xs = np.asarray(self.abscissae, dtype=np.float64)
        ys = np.asarray(self.ordinates, dtype=np.float64)
        if xs.ndim != 1 or xs.shape != ys.shape or xs.size < 2:
            raise ValueError("tabulated data needs two equal-length 1-d arrays, size >= 2")
        if not (np.all(np.isfinite(xs)) and np.all(np.isfinite(ys))):
            raise ValueError("tabulated data must be finite")
        if np.any(np.diff(xs) <= 0):
            raise ValueError("tabulated abscissae must be strictly increasing")
        object.__setattr__(self, "abscissae", xs)
        object.__setattr__(self, "ordinates", ys)

    def __call__(self, x):
        return np.interp(np.asarray(x), self.abscissae, self.ordinates)


@dataclass(frozen=True)
class Composite:
    """Wrap an arbitrary callback as an evaluator."""

    fn: Callable
    label: str = "composite"

    def __call__(self, x):
        return np.asarray(self.fn(np.asarray(x)), dtype=np.float64)


@dataclass(frozen=True)
class FunctionSource:
    """An evaluable real function on an interval domain."""

    domain: IntervalDomain
    evaluator: Callable

    def __call__(self, x):
        return evaluate(self, x)


def sine_source(amplitude: float, frequency: float, phase: float,
                domain: IntervalDomain | None = None) -> FunctionSource:
    """Sine on [0, 1] with Lebesgue measure unless a domain is given."""
    if domain is None:
        domain = IntervalDomain(0.0, 1.0)
    return FunctionSource(domain, ParametricSine(amplitude, frequency, phase))


def tabulated_source(abscissae, ordinates, measure: Measure = Measure.LEBESGUE) -> FunctionSource:
    """Interpolated source whose domain spans the tabulated abscissae."""
    ev = TabulatedSamples(np.asarray(abscissae), np.asarray(ordinates))
    dom = IntervalDomain(float(ev.abscissae[0]), float(ev.abscissae[-1]), measure)
    return FunctionSource(dom, ev)


def evaluate(f: FunctionSource, x):
    """Evaluate ``f`` at scalar or array ``x``.

    Raises
    ------
    DomainError
        If any point lies outside [a, b].
    NonFiniteError
        If the evaluator yields NaN or infinity.
    """
    arr = np.asarray(x, dtype=np.float64)
    scalar = arr.ndim == 0
    pts = np.atleast_1d(arr)
    dom = f.domain
    if np.any((pts < dom.a) | (pts > dom.b)) or np.any(~np.isfinite(pts)):
        bad = pts[(pts < dom.a) | (pts > dom.b) | ~np.isfinite(pts)][0]
        raise DomainError(f"x={bad!r} outside domain [{dom.a}, {dom.b}]")
    vals = np.asarray(f.evaluator(pts), dtype=np.float64)
    if not np.all(np.isfinite(vals)):
        bad = pts[~np.isfinite(vals)][0]
        raise NonFiniteError(f"evaluator returned non-finite value at x={bad!r}")
    return float(vals[0]) if scalar else vals


# ---------------------------------------------------------------------------
# Dataset ingestion
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DatasetRecord:
    id: str
    source: FunctionSource


def _parse_floats(parts: list[str], n: int, lineno: int) -> list[float]:
    if len(parts) != n:
        raise ParseError(f"expected {n} parameters, got {len(parts)}", lineno)
    try:
        return [float(p) for p in parts]
    except ValueError as exc:
        raise ParseError(str(exc), lineno) from None


def parse_dataset_line(line: str, lineno: int = 1, base_dir=None,
                       clip: float = 1e-3) -> DatasetRecord:
    """Parse one ``id,kind,params...`` record line."""
    from .wasserstein import Gaussian, QuantileClip, quantile_source  # local: avoids cycle

    parts = [p.strip() for p in line.split(",")]
    if len(parts) < 2:
        raise ParseError("expected `id,kind,params...`", lineno)
    rec_id, kind = parts[0], parts[1]
    if not rec_id:
        raise ParseError("empty id", lineno)
    if kind == "sine":
        amp, freq, phase = _parse_floats(parts[2:], 3, lineno)
        source = sine_source(amp, freq, phase)
    elif kind == "gaussian":
        mu, sigma = _parse_floats(parts[2:], 2, lineno)
        if sigma <= 0:
            raise ParseError(f"sigma must be positive, got {sigma}", lineno)
        source = quantile_source(Gaussian(mu, sigma), QuantileClip(clip))
    elif kind == "table":
        if len(parts) != 3:
            raise ParseError("table rows take exactly one path parameter", lineno)
        table_path = Path(base_dir or ".") / parts[2]
        try:
            xs, ys = _load_two_column_csv(table_path)
            source = tabulated_source(xs, ys)
        except (OSError, ValueError) as exc:
            raise ParseError(f"bad table {parts[2]!r}: {exc}", lineno) from None
    else:
        raise ParseError(f"unknown kind {kind!r}", lineno)
    return DatasetRecord(rec_id, source)


def load_dataset(path, fmt: str = "csv", clip: float = 1e-3) -> list[DatasetRecord]:
    """Load function records from a text dataset file.

    One record per line: ``id,kind,params...`` with kind one of ``sine``
    (amplitude, frequency, phase; domain [0, 1]), ``gaussian`` (mu, sigma;
    becomes the quantile function on [clip, 1 - clip]) or ``table`` (path to
    a two-column CSV, resolved relative to the dataset file).  Lines
    beginning with ``#`` are comments.
    """
    if fmt != "csv":
        raise ValueError(f"unknown dataset format {fmt!r}")
    path = Path(path)
    records: list[DatasetRecord] = []
    seen: set[str] = set()
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            record = parse_dataset_line(line, lineno, path.parent, clip)
            if record.id in seen:
                raise DuplicateIdError(f"line {lineno}: duplicate id {record.id!r}")
            seen.add(record.id)
            records.append(record)
    return records


def _load_two_column_csv(path: Path) -> tuple[np.ndarray, np.ndarray]:
    xs, ys = [], []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split(",")
            if len(parts) != 2:
                raise ValueError(f"line {lineno}: expected two columns")
            xs.append(float(parts[0]))
            ys.append(float(parts[1]))
    return np.asarray(xs), np.asarray(ys)


# ---------------------------------------------------------------------------
# Quadrature oracles
# ---------------------------------------------------------------------------

def quadrature_rule(domain: IntervalDomain, nodes: int = DEFAULT_ORACLE_NODES):
    """Nodes and weights integrating ``int F(x) dmu(x)`` over the domain.

    Composite 16-point Gauss-Legendre under Lebesgue measure;
    Gauss-Chebyshev (midpoint rule in the theta variable) under the
    Chebyshev weight.
    """
    if domain.measure is Measure.CHEBYSHEV_WEIGHT:
        theta = np.pi * (np.arange(nodes) + 0.5) / nodes
        x = domain.midpoint + domain.halfwidth * np.cos(theta)
        w = np.full(nodes, np.pi / nodes)
        return x, w
    if domain.measure is Measure.LEBESGUE:
        panels = max(1, nodes // _GL_PANEL_ORDER)
        xs, ws = np.polynomial.legendre.leggauss(_GL_PANEL_ORDER)
        edges = np.linspace(domain.a, domain.b, panels + 1)
        mid = 0.5 * (edges[:-1] + edges[1:])
        half = 0.5 * (edges[1:] - edges[:-1])
        x = (mid[:, None] + half[:, None] * xs[None, :]).ravel()
        w = (half[:, None] * ws[None, :]).ravel()
        return x, w
    raise ValueError(f"no quadrature rule for measure {domain.measure}")


def integrate_oracle(fn: Callable, domain: IntervalDomain,
                     nodes: int = DEFAULT_ORACLE_NODES) -> float:
    """High-resolution quadrature of a raw callable against the measure."""
    x, w = quadrature_rule(domain, nodes)
    return float(np.dot(w, np.asarray(fn(x), dtype=np.float64)))


def _require_shared_domain(f: FunctionSource, g: FunctionSource) -> IntervalDomain:
    if f.domain != g.domain:
        raise DomainError(f"domains differ: {f.domain} vs {g.domain}")
    return f.domain


def l2_inner_oracle(f: FunctionSource, g: FunctionSource,
                    nodes: int = DEFAULT_ORACLE_NODES) -> float:
    """<f, g> under the shared domain measure."""
    dom = _require_shared_domain(f, g)
    x, w = quadrature_rule(dom, nodes)
    return float(np.dot(w, evaluate(f, x) * evaluate(g, x)))


def l2_norm_oracle(f: FunctionSource, nodes: int = DEFAULT_ORACLE_NODES) -> float:
    x, w = quadrature_rule(f.domain, nodes)
    v = evaluate(f, x)
    return float(np.sqrt(np.dot(w, v * v)))


def l2_distance_oracle(f: FunctionSource, g: FunctionSource,
                       nodes: int = DEFAULT_ORACLE_NODES) -> float:
    dom = _require_shared_domain(f, g)
    x, w = quadrature_rule(dom, nodes)
    d = evaluate(f, x) - evaluate(g, x)
    return float(np.sqrt(max(np.dot(w, d * d), 0.0)))


def lp_distance_oracle(f: FunctionSource, g: FunctionSource, p: float,
                       nodes: int = DEFAULT_ORACLE_NODES) -> float:
    """L^p distance under the shared domain measure, p in (0, 2]."""
    dom = _require_shared_domain(f, g)
    x, w = quadrature_rule(dom, nodes)
    d = np.abs(evaluate(f, x) - evaluate(g, x))
    return float(np.dot(w, d**p) ** (1.0 / p))


def cosine_similarity_oracle(f: FunctionSource, g: FunctionSource,
                             nodes: int = DEFAULT_ORACLE_NODES) -> float:
    """<f, g> / (||f|| ||g||) under the shared domain measure.

    Raises
    ------
    ZeroNormError
        If either norm falls below 1e-14.
    """
    dom = _require_shared_domain(f, g)
    x, w = quadrature_rule(dom, nodes)
    fv, gv = evaluate(f, x), evaluate(g, x)
    nf = np.sqrt(np.dot(w, fv * fv))
    ng = np.sqrt(np.dot(w, gv * gv))
    if nf < 1e-14 or ng < 1e-14:
        raise ZeroNormError("cosine similarity undefined for zero-norm input")
    return float(np.dot(w, fv * gv) / (nf * ng))
