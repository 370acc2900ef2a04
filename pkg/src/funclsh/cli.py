"""Command-line front end.

Subcommands::

    funclsh experiment {cosine|l2|wasserstein|convergence} [flags]
    funclsh index build DATA [flags]
    funclsh index query INDEX --query "id,kind,params..." [--k N]
    funclsh index info INDEX
    funclsh plot CSV --out FILE.svg

Exit codes: 0 success, 1 usage error, 2 data error, 3 tolerance failure
(``experiment --check``).
"""

from __future__ import annotations

import argparse
import sys

from .errors import FunclshError
from .experiments import (EXPERIMENTS, METHODS, ExperimentConfig, emit_svg_scatter,
                          run_experiment)
from .functions import IntervalDomain, Measure, load_dataset, parse_dataset_line
from .index import HashFamilySpec, IndexConfig, LshIndex
from .montecarlo import McEmbedConfig, Sampler
from .ortho import JacobianMode, OrthoEmbedConfig


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit(2); the contract is 1
        raise _UsageError(message)


def _add_common_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--n-hashes", type=int, default=1024, help="hash functions per run")
    p.add_argument("--dim", type=int, default=64, help="embedding dimension")
    p.add_argument("--pairs", type=int, default=200,
                   help="function pairs (seeds per N for convergence)")
    p.add_argument("--method", choices=METHODS, default="chebyshev")
    p.add_argument("--r", type=float, default=1.0, help="bucket width of the distance hash")
    p.add_argument("--clip", type=float, default=1e-3, help="quantile clipping delta")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--out", default=None, help="output CSV path")


def _build_parser() -> _Parser:
    parser = _Parser(prog="funclsh",
                     description="LSH for functions: collision experiments and index tooling")
    sub = parser.add_subparsers(dest="command", required=True)

    exp = sub.add_parser("experiment", help="reproduce a collision or convergence figure")
    exp.add_argument("experiment", choices=EXPERIMENTS)
    _add_common_flags(exp)
    exp.add_argument("--check", action="store_true",
                     help="exit 3 unless the run meets its acceptance tolerance")

    idx = sub.add_parser("index", help="build, query or inspect an index file")
    idx_sub = idx.add_subparsers(dest="index_command", required=True)

    build = idx_sub.add_parser("build", help="embed a dataset file into an index")
    build.add_argument("data", help="dataset file (id,kind,params per line)")
    build.add_argument("--out", required=True, help="index file to write")
    build.add_argument("--tables", type=int, default=16, help="hash tables (L)")
    build.add_argument("--bands", type=int, default=4, help="hashes per bucket key (K)")
    build.add_argument("--method", choices=METHODS, default="chebyshev")
    build.add_argument("--dim", type=int, default=64)
    build.add_argument("--r", type=float, default=1.0)
    build.add_argument("--clip", type=float, default=1e-3)
    build.add_argument("--seed", type=int, default=0)

    query = idx_sub.add_parser("query", help="run a nearest-neighbor query")
    query.add_argument("index", help="index file")
    query.add_argument("--query", required=True, help="record line `id,kind,params...`")
    query.add_argument("--k", type=int, default=5, help="results to return")
    query.add_argument("--clip", type=float, default=1e-3)

    info = idx_sub.add_parser("info", help="print an index summary")
    info.add_argument("index", help="index file")

    plot = sub.add_parser("plot", help="render a collision CSV as an SVG scatter")
    plot.add_argument("csv", help="input CSV with theoretical/observed columns")
    plot.add_argument("--out", required=True, help="SVG file to write")

    return parser


def _index_config(args, domain: IntervalDomain, jacobian: JacobianMode) -> IndexConfig:
    if args.method == "chebyshev":
        embedding = OrthoEmbedConfig(max_terms=max(args.dim, 2), fixed_terms=args.dim,
                                     jacobian_mode=jacobian)
    else:
        sampler = Sampler.IID_UNIFORM if args.method == "mc" else Sampler.SOBOL
        embedding = McEmbedConfig(args.dim, p=2.0, sampler=sampler, seed=args.seed)
    return IndexConfig(args.tables, args.bands,
                       HashFamilySpec("pstable", 2.0, args.r),
                       embedding, domain, args.seed)


def _cmd_index_build(args) -> int:
    from .wasserstein import _QuantileEvaluator

    records = load_dataset(args.data, clip=args.clip)
    if not records:
        print("dataset is empty; nothing to index", file=sys.stderr)
        return 2
    a = records[0].source.domain.a
    b = records[0].source.domain.b
    for rec in records:
        if (rec.source.domain.a, rec.source.domain.b) != (a, b):
            print(f"record {rec.id!r} has domain [{rec.source.domain.a}, "
                  f"{rec.source.domain.b}], expected [{a}, {b}]", file=sys.stderr)
            return 2
    # Quantile datasets are indexed on the Wasserstein (Lebesgue) metric;
    # ordinary function datasets use the self-consistent Chebyshev weight
    # when embedding through the basis route.
    all_quantiles = all(isinstance(rec.source.evaluator, _QuantileEvaluator)
                        for rec in records)
    if args.method == "chebyshev" and not all_quantiles:
        measure, jacobian = Measure.CHEBYSHEV_WEIGHT, JacobianMode.CHEBYSHEV_WEIGHTED
    else:
        measure, jacobian = Measure.LEBESGUE, JacobianMode.LEBESGUE_JACOBIAN
    index = LshIndex(_index_config(args, IntervalDomain(a, b, measure), jacobian))
    for rec in records:
        index.insert(rec.id, rec.source)
    index.save(args.out)
    print(f"indexed {len(index)} items into {args.out} "
          f"(L={args.tables}, K={args.bands}, method={args.method})")
    return 0


def _cmd_index_query(args) -> int:
    index = LshIndex.load(args.index)
    record = parse_dataset_line(args.query, clip=args.clip)
    result = index.query(record.source, args.k)
    print(f"candidates: {result.candidate_count}"
          + (" (fewer than k)" if result.short else ""))
    for item_id, dist in result.matches:
        print(f"{item_id}\t{dist:.6g}")
    return 0


def _cmd_index_info(args) -> int:
    index = LshIndex.load(args.index)
    cfg = index.config
    emb = cfg.embedding
    kind = "ortho" if isinstance(emb, OrthoEmbedConfig) else emb.sampler.value
    print(f"items: {len(index)}")
    print(f"tables (L): {cfg.tables}, hashes per band (K): {cfg.hashes_per_band}")
    print(f"family: {cfg.family.kind} (p={cfg.family.p}, r={cfg.family.r})")
    print(f"embedding: {kind}, domain [{cfg.domain.a}, {cfg.domain.b}] "
          f"({cfg.domain.measure.value}), seed {cfg.seed}")
    sizes = [len(bucket) for table in index._buckets for bucket in table.values()]
    if sizes:
        print(f"buckets: {len(sizes)}, largest {max(sizes)}, "
              f"mean {sum(sizes) / len(sizes):.2f}")
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:  # --help
        return int(exc.code or 0)

    try:
        if args.command == "experiment":
            cfg = ExperimentConfig(args.experiment, args.n_hashes, args.dim, args.pairs,
                                   args.method, args.r, args.clip, args.seed, args.out)
            result = run_experiment(cfg)
            print(f"{args.experiment}/{args.method}: {result.detail}")
            if args.out:
                print(f"wrote {args.out}")
            if args.check and not result.ok:
                print("tolerance check FAILED", file=sys.stderr)
                return 3
            return 0
        if args.command == "index":
            if args.index_command == "build":
                return _cmd_index_build(args)
            if args.index_command == "query":
                return _cmd_index_query(args)
            return _cmd_index_info(args)
        if args.command == "plot":
            emit_svg_scatter(args.csv, args.out)
            print(f"wrote {args.out}")
            return 0
    except ValueError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except (FunclshError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
