"""Sub-linear sketch for labeled, weighted, timestamped graph streams.

The sketch summarizes a directed edge stream in a block-partitioned matrix
whose cells carry twin segments and per-subwindow dual counters (a weight
count plus a prime-product label encoding). A sliding window of k subwindows
expires old arrivals automatically. Supported queries: per-vertex and
per-label in/out weights, edge weights (optionally restricted to one edge
label), path reachability, and approximate subgraph counting. An exact
reference store with the same query surface backs error measurement.
"""

from .analysis import (CollisionParams, InvalidProbabilities,
                       collision_free_probability, query_error_bound)
from .errors import (ConfigError, EmptyPattern, GraphSketchError,
                     OracleCapExceeded, PathQueryDisabled, RegressingClock,
                     SnapshotError, StreamFormatError, ZeroTruth)
from .generator import StreamSpec, generate_stream
from .hashing import (DEFAULT_HASH_SEED, DEFAULT_LCG, Band, HashedVertex,
                      PrimeTable, SketchConfig, SkewedBlocks, UniformBlocks,
                      block_index, candidate_list, first_primes, hash64,
                      label_prime, precompute, sample_sequence, split_hash)
from .oracle import (ErrorReport, ExactStore, QueryTypeStats,
                     ReachabilityStats, are, relative_error)
from .sketch import (EdgeItem, GraphSketch, InsertReceipt, QueryResult,
                     VertexRegistry)
from .snapshot import load_sketch, save_sketch

__version__ = "0.1.0"

__all__ = [
    "Band",
    "CollisionParams",
    "ConfigError",
    "DEFAULT_HASH_SEED",
    "DEFAULT_LCG",
    "EdgeItem",
    "EmptyPattern",
    "ErrorReport",
    "ExactStore",
    "GraphSketch",
    "GraphSketchError",
    "HashedVertex",
    "InsertReceipt",
    "InvalidProbabilities",
    "OracleCapExceeded",
    "PathQueryDisabled",
    "PrimeTable",
    "QueryResult",
    "QueryTypeStats",
    "ReachabilityStats",
    "RegressingClock",
    "SketchConfig",
    "SkewedBlocks",
    "SnapshotError",
    "StreamFormatError",
    "StreamSpec",
    "UniformBlocks",
    "VertexRegistry",
    "ZeroTruth",
    "are",
    "block_index",
    "candidate_list",
    "collision_free_probability",
    "first_primes",
    "generate_stream",
    "hash64",
    "label_prime",
    "load_sketch",
    "precompute",
    "query_error_bound",
    "relative_error",
    "sample_sequence",
    "save_sketch",
    "split_hash",
]
