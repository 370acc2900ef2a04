"""Multi-table LSH index over embedded functions.

Every item is embedded once at insertion.  Each of the L tables keys its
buckets by a K-tuple of hash values (the usual AND/OR amplification:
concatenating K hashes sharpens the collision curve, L independent tables
recover recall).  Queries collect the union of the query's buckets across
tables and re-rank the candidates by exact embedded distance.

Persistence is a little-endian binary format (magic ``FLSH``) holding the
config and the embedded vectors, with a trailing CRC-32; buckets are
rebuilt on load by re-hashing the stored vectors, which reproduces them
exactly because all hash coefficients are counter-derived from the config
seed.  The byte layout is documented in ``docs/index_format.md``.
"""

from __future__ import annotations

import struct
import zlib
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import (ChecksumError, DomainError, DuplicateIdError,
                     EmptyIndexError, FormatVersionError)
from .functions import (FunctionSource, IntervalDomain, Measure,
                        cosine_similarity_oracle, l2_distance_oracle)
from .hashing import (PStableHashFunction, SimHashFunction, hash_pstable,
                      hash_simhash)
from .montecarlo import McEmbedConfig, SamplePlan, Sampler, embed_mc, make_sample_plan
from .ortho import JacobianMode, OrthoEmbedConfig, embed_ortho

FORMAT_MAGIC = b"FLSH"
FORMAT_VERSION = 1


@dataclass(frozen=True)
class HashFamilySpec:
    """Which R^N family backs the index: ``simhash`` or ``pstable``."""

    kind: str
    p: float = 2.0
    r: float = 1.0

    def __post_init__(self):
        if self.kind not in ("simhash", "pstable"):
            raise ValueError(f"unknown hash family {self.kind!r}")
        if not 0.0 < self.p <= 2.0:
            raise ValueError(f"p={self.p} outside (0, 2]")
        if self.r <= 0:
            raise ValueError("width r must be positive")


@dataclass(frozen=True)
class IndexConfig:
    tables: int
    hashes_per_band: int
    family: HashFamilySpec
    embedding: OrthoEmbedConfig | McEmbedConfig
    domain: IntervalDomain
    seed: int = 0

    def __post_init__(self):
        if self.tables < 1 or self.hashes_per_band < 1:
            raise ValueError("tables and hashes_per_band must be positive")
        if self.family.kind == "pstable":
            if isinstance(self.embedding, OrthoEmbedConfig):
                if self.family.p != 2.0:
                    raise ValueError("orthonormal embedding pairs with the p = 2 hash only")
            elif self.family.p != self.embedding.p:
                raise ValueError("hash family p must match the embedding's p")


@dataclass
class QueryResult:
    """Top-k matches plus accounting for recall/efficiency studies."""

    matches: list[tuple[str, float]]
    candidate_count: int
    short: bool = False


class LshIndex:
    """Insert-only LSH index; single writer, concurrent readers."""

    def __init__(self, config: IndexConfig):
        self.config = config
        seed, k = config.seed, config.hashes_per_band
        if config.family.kind == "simhash":
            self._funcs = [[SimHashFunction(seed, t * k + j) for j in range(k)]
                           for t in range(config.tables)]
        else:
            self._funcs = [[PStableHashFunction(config.family.p, config.family.r,
                                                seed, t * k + j) for j in range(k)]
                           for t in range(config.tables)]
        self._buckets: list[dict[tuple[int, ...], set[str]]] = [
            {} for _ in range(config.tables)]
        self._items: dict[str, np.ndarray] = {}
        self._sources: dict[str, FunctionSource] = {}
        self._plan: SamplePlan | None = None
        if isinstance(config.embedding, McEmbedConfig):
            self._plan = make_sample_plan(config.domain, config.embedding)

    def __len__(self) -> int:
        return len(self._items)

    @property
    def plan(self) -> SamplePlan | None:
        return self._plan

    def embed(self, f: FunctionSource) -> np.ndarray:
        """Embed a function under the index's configured embedding."""
        if (f.domain.a, f.domain.b) != (self.config.domain.a, self.config.domain.b):
            raise DomainError(
                f"function domain [{f.domain.a}, {f.domain.b}] does not match "
                f"index domain [{self.config.domain.a}, {self.config.domain.b}]")
        if self._plan is not None:
            return embed_mc(f, self._plan).values
        return embed_ortho(f, self.config.embedding).values

    def _keys(self, values: np.ndarray) -> list[tuple[int, ...]]:
        if self.config.family.kind == "simhash":
            return [tuple(hash_simhash(h, values) for h in row) for row in self._funcs]
        return [tuple(hash_pstable(h, values) for h in row) for row in self._funcs]

    def insert(self, item_id: str, f: FunctionSource) -> None:
        """Embed ``f`` and file ``item_id`` into one bucket per table."""
        if item_id in self._items:
            raise DuplicateIdError(f"id {item_id!r} already indexed")
        values = self.embed(f)
        self._insert_embedded(item_id, values)
        self._sources[item_id] = f

    def _insert_embedded(self, item_id: str, values: np.ndarray) -> None:
        if item_id in self._items:
            raise DuplicateIdError(f"id {item_id!r} already indexed")
        self._items[item_id] = values
        for table, key in zip(self._buckets, self._keys(values)):
            table.setdefault(key, set()).add(item_id)

    def _distance(self, u: np.ndarray, v: np.ndarray) -> float:
        # Vectors may differ in length (adaptive truncation); the shorter
        # one is implicitly zero beyond its own terms.
        if self.config.family.kind == "simhash":
            nu, nv = np.linalg.norm(u), np.linalg.norm(v)
            if nu == 0.0 or nv == 0.0:
                return 1.0
            m = min(len(u), len(v))
            cos = float(np.dot(u[:m], v[:m])) / (nu * nv)
            return float(np.arccos(min(1.0, max(-1.0, cos))) / np.pi)
        n = max(len(u), len(v))
        diff = np.zeros(n)
        diff[: len(u)] = u
        diff[: len(v)] -= v
        p = self.config.family.p
        if p == 2.0:
            return float(np.linalg.norm(diff))
        return float(np.sum(np.abs(diff) ** p) ** (1.0 / p))

    def _oracle_distance(self, qid: str, q: FunctionSource) -> float:
        src = self._sources.get(qid)
        if src is None:
            raise ValueError("oracle re-ranking requires retained function sources")
        if self.config.family.kind == "simhash":
            cos = cosine_similarity_oracle(src, q)
            return float(np.arccos(min(1.0, max(-1.0, cos))) / np.pi)
        return l2_distance_oracle(src, q)

    def query(self, q: FunctionSource, k: int, rerank: str = "embedded") -> QueryResult:
        """Rank bucket-collision candidates by distance to the query.

        ``rerank`` is ``"embedded"`` (distance in the embedded space) or
        ``"oracle"`` (quadrature distance; needs retained sources).
        """
        if not self._items:
            raise EmptyIndexError("query issued against an empty index")
        if k < 1:
            raise ValueError("k must be positive")
        if rerank not in ("embedded", "oracle"):
            raise ValueError(f"unknown rerank mode {rerank!r}")
        q_values = self.embed(q)
        candidates: set[str] = set()
        for table, key in zip(self._buckets, self._keys(q_values)):
            candidates |= table.get(key, set())
        if rerank == "oracle":
            scored = [(cid, self._oracle_distance(cid, q)) for cid in candidates]
        else:
            scored = [(cid, self._distance(self._items[cid], q_values))
                      for cid in candidates]
        scored.sort(key=lambda t: (t[1], t[0]))
        return QueryResult(scored[:k], len(candidates), short=len(candidates) < k)

    # -- persistence --------------------------------------------------------

    def save(self, path) -> None:
        """Write config and embedded items; buckets are rebuilt on load."""
        blob = bytearray()
        blob += FORMAT_MAGIC
        blob += struct.pack("<I", FORMAT_VERSION)
        cfg = self.config
        fam_kind = 0 if cfg.family.kind == "simhash" else 1
        measure = 0 if cfg.domain.measure is Measure.LEBESGUE else 1
        blob += struct.pack("<qqQqdd", cfg.tables, cfg.hashes_per_band, cfg.seed,
                            fam_kind, cfg.family.p, cfg.family.r)
        blob += struct.pack("<ddq", cfg.domain.a, cfg.domain.b, measure)
        emb = cfg.embedding
        if isinstance(emb, OrthoEmbedConfig):
            mode = 0 if emb.jacobian_mode is JacobianMode.CHEBYSHEV_WEIGHTED else 1
            fixed = -1 if emb.fixed_terms is None else emb.fixed_terms
            blob += struct.pack("<qqqdq", 0, emb.max_terms, fixed,
                                emb.tail_tolerance, mode)
        else:
            sampler = 0 if emb.sampler is Sampler.IID_UNIFORM else 1
            blob += struct.pack("<qqdqQq", 1, emb.sample_count, emb.p, sampler,
                                emb.seed, int(emb.scramble))
        blob += struct.pack("<q", len(self._items))
        for item_id in sorted(self._items):
            raw = item_id.encode("utf-8")
            vec = np.ascontiguousarray(self._items[item_id], dtype="<f8")
            blob += struct.pack("<I", len(raw)) + raw
            blob += struct.pack("<I", len(vec)) + vec.tobytes()
        blob += struct.pack("<I", zlib.crc32(bytes(blob)))
        Path(path).write_bytes(bytes(blob))

    @classmethod
    def load(cls, path) -> "LshIndex":
        """Load an index; any corruption fails before anything is built."""
        blob = Path(path).read_bytes()
        if len(blob) < 12:
            raise ChecksumError("file too short to be an index")
        body, (crc,) = blob[:-4], struct.unpack("<I", blob[-4:])
        if zlib.crc32(body) != crc:
            raise ChecksumError("checksum mismatch; file is truncated or corrupt")
        if body[:4] != FORMAT_MAGIC:
            raise ChecksumError(f"bad magic {body[:4]!r}")
        (version,) = struct.unpack_from("<I", body, 4)
        if version != FORMAT_VERSION:
            raise FormatVersionError(
                f"file has format version {version}; this build reads version {FORMAT_VERSION}")
        off = 8
        tables, k, seed, fam_kind, fam_p, fam_r = struct.unpack_from("<qqQqdd", body, off)
        off += struct.calcsize("<qqQqdd")
        a, b, measure = struct.unpack_from("<ddq", body, off)
        off += struct.calcsize("<ddq")
        (emb_kind,) = struct.unpack_from("<q", body, off)
        off += 8
        if emb_kind == 0:
            max_terms, fixed, tail, mode = struct.unpack_from("<qqdq", body, off)
            off += struct.calcsize("<qqdq")
            embedding = OrthoEmbedConfig(
                max_terms, None if fixed < 0 else fixed, tail,
                JacobianMode.CHEBYSHEV_WEIGHTED if mode == 0 else JacobianMode.LEBESGUE_JACOBIAN)
        else:
            count, p, sampler, mc_seed, scramble = struct.unpack_from("<qdqQq", body, off)
            off += struct.calcsize("<qdqQq")
            embedding = McEmbedConfig(count, p,
                                      Sampler.IID_UNIFORM if sampler == 0 else Sampler.SOBOL,
                                      mc_seed, bool(scramble))
        config = IndexConfig(
            tables, k,
            HashFamilySpec("simhash" if fam_kind == 0 else "pstable", fam_p, fam_r),
            embedding,
            IntervalDomain(a, b, Measure.LEBESGUE if measure == 0 else Measure.CHEBYSHEV_WEIGHT),
            seed)
        index = cls(config)
        (count,) = struct.unpack_from("<q", body, off)
        off += 8
        for _ in range(count):
            (id_len,) = struct.unpack_from("<I", body, off)
            off += 4
            item_id = body[off:off + id_len].decode("utf-8")
            off += id_len
            (vec_len,) = struct.unpack_from("<I", body, off)
            off += 4
            vec = np.frombuffer(body, dtype="<f8", count=vec_len, offset=off).astype(np.float64)
            off += 8 * vec_len
            index._insert_embedded(item_id, vec)
        return index


def index_insert(index: LshIndex, item_id: str, f: FunctionSource) -> None:
    index.insert(item_id, f)


def index_query(index: LshIndex, q: FunctionSource, k: int,
                rerank: str = "embedded") -> QueryResult:
    return index.query(q, k, rerank)


def index_save(index: LshIndex, path) -> None:
    index.save(path)


def index_load(path) -> LshIndex:
    return LshIndex.load(path)
