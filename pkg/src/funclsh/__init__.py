"""funclsh: locality-sensitive hashing for functions.

Hash functions living in L^p spaces by embedding them into R^N first,
either through an orthonormal cosine/Chebyshev expansion (p = 2) or by
(quasi-)Monte Carlo point sampling (any p in (0, 2]), then applying
standard vector hashes (SimHash, the p-stable bucket hash).  Includes a
multi-table LSH index and 1-D Wasserstein distance support via quantile
functions.
"""

from .errors import (BasisMismatchError, ChecksumError, DomainError,
                     DuplicateIdError, EmptyIndexError, EpsilonTooLargeError,
                     FormatVersionError, FunclshError, KindError,
                     NonFiniteError, ParseError, RangeError, TruncationError,
                     UnsupportedMeasureError, UnsupportedPError,
                     ZeroNormError, ZeroVectorError)
from .functions import (Composite, DatasetRecord, FunctionSource,
                        IntervalDomain, Measure, ParametricSine,
                        TabulatedSamples, cosine_similarity_oracle, evaluate,
                        l2_distance_oracle, l2_inner_oracle, l2_norm_oracle,
                        load_dataset, lp_distance_oracle, sine_source,
                        tabulated_source)
from .hashing import (CollisionModel, PStableHashFunction, SimHashFunction,
                      batch_hash_pstable, batch_hash_simhash,
                      collision_prob_pstable, collision_prob_simhash,
                      hash_pstable, hash_simhash, pstable_family,
                      simhash_family, theorem1_bounds)
from .index import (HashFamilySpec, IndexConfig, LshIndex, QueryResult,
                    index_insert, index_load, index_query, index_save)
from .montecarlo import (EmbeddingVector, McEmbedConfig, SamplePlan, Sampler,
                         embed_mc, estimate_embedding_variance, lp_distance,
                         make_sample_plan, sobol_sequence)
from .normal import normal_cdf, normal_quantile
from .ortho import (BasisDescriptor, CoefficientVector, JacobianMode,
                    OrthoEmbedConfig, embed_ortho, embedded_distance,
                    embedded_inner, embedding_error_bound)
from .wasserstein import (Distribution1D, Empirical, Gaussian, QuantileClip,
                          quantile, quantile_source, wasserstein_empirical_exact,
                          wasserstein_gaussian_exact, wasserstein_via_embedding)

__version__ = "0.1.0"
