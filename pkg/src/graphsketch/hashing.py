"""Deterministic hashing, address splitting, and storage-block layout.

Everything in this module is a pure function of its inputs, so results are
identical across runs, platforms, and threads for a fixed seed.
"""

from __future__ import annotations

import hashlib
import warnings
from dataclasses import dataclass, field
from functools import lru_cache

from .errors import ConfigError

HASH_BITS = 64
HASH_RANGE = 1 << HASH_BITS

# Any fixed 64-bit value works; this one is the usual golden-ratio constant.
DEFAULT_HASH_SEED = 0x9E3779B97F4A7C15

# Multiplier, increment, modulus. The modulus is the Mersenne prime 2^31 - 1,
# large enough that the per-fingerprint candidate sequences stay duplicate-free
# (checked exhaustively by SketchConfig validation).
DEFAULT_LCG = (5, 3, (1 << 31) - 1)


def hash64(key: str | bytes, seed: int = DEFAULT_HASH_SEED) -> int:
    """Keyed 64-bit hash of a string or byte key.

    Uses blake2b with an 8-byte digest and the seed as the key, which gives
    avalanche-quality mixing and full determinism for a fixed seed.
    """
    if isinstance(key, str):
        key = key.encode("utf-8")
    digest = hashlib.blake2b(
        key, digest_size=8, key=(seed & (HASH_RANGE - 1)).to_bytes(8, "little")
    ).digest()
    return int.from_bytes(digest, "little")


def split_hash(h: int, fingerprint_range: int) -> tuple[int, int]:
    """Split a hash value into (initial address, fingerprint)."""
    return h // fingerprint_range, h % fingerprint_range


def lcg_sequence(seed: int, length: int, lcg: tuple[int, int, int]) -> tuple[int, ...]:
    """First `length` values of the linear-congruential sequence from `seed`.

    The seed itself is not part of the output: the first emitted value is
    (T*seed + I) mod M.
    """
    mult, inc, mod = lcg
    out = []
    x = seed
    for _ in range(length):
        x = (mult * x + inc) % mod
        out.append(x)
    return tuple(out)


def candidate_list(
    f: int, s0: int, r: int, lcg: tuple[int, int, int], block_width: int
) -> tuple[int, ...]:
    """The r candidate addresses of a vertex inside its block.

    The fingerprint seeds an LCG run of length r; each value offsets the
    initial address modulo the block width.
    """
    return tuple((s0 + l) % block_width for l in lcg_sequence(f, r, lcg))


def sample_sequence(
    f_src: int, f_dst: int, s: int, r: int, lcg: tuple[int, int, int]
) -> tuple[tuple[int, int], ...]:
    """The s sampled (row-candidate, column-candidate) ordinal pairs of an edge.

    Seeded by the sum of the two endpoint fingerprints, so the sequence is
    invariant under swapping them. Each component lies in [0, r).
    """
    return tuple(
        ((sp // r) % r, sp % r) for sp in lcg_sequence(f_src + f_dst, s, lcg)
    )


@dataclass(frozen=True)
class Band:
    """One contiguous band of matrix rows (or columns) owned by a label slot."""

    ordinal: int
    start: int
    width: int


class UniformBlocks:
    """Equal-width partition of the matrix into n bands of width b."""

    def __init__(self, matrix_width: int, block_width: int):
        if block_width <= 0 or matrix_width % block_width != 0:
            raise ConfigError(
                f"block width {block_width} must evenly divide matrix width {matrix_width}"
            )
        self.matrix_width = matrix_width
        self.block_width = block_width
        self.slots = matrix_width // block_width

    @property
    def widths(self) -> tuple[int, ...]:
        return (self.block_width,) * self.slots

    def band(self, slot: int) -> Band:
        return Band(slot, slot * self.block_width, self.block_width)

    def band_of_index(self, index: int) -> Band:
        return self.band(index // self.block_width)

    def __eq__(self, other):
        return (
            isinstance(other, UniformBlocks)
            and other.matrix_width == self.matrix_width
            and other.block_width == self.block_width
        )

    def __repr__(self):
        return f"UniformBlocks(d={self.matrix_width}, b={self.block_width})"


class SkewedBlocks:
    """Explicit per-slot band widths; slot i owns the i-th band."""

    def __init__(self, widths):
        widths = tuple(int(w) for w in widths)
        if not widths or any(w <= 0 for w in widths):
            raise ConfigError("skewed layout needs at least one positive band width")
        self.matrix_width = sum(widths)
        self._widths = widths
        starts = []
        acc = 0
        for w in widths:
            starts.append(acc)
            acc += w
        self._starts = tuple(starts)
        self.slots = len(widths)

    @property
    def widths(self) -> tuple[int, ...]:
        return self._widths

    def band(self, slot: int) -> Band:
        return Band(slot, self._starts[slot], self._widths[slot])

    def band_of_index(self, index: int) -> Band:
        # bands are few; linear scan beats bisect for the sizes in play
        for slot in range(self.slots - 1, -1, -1):
            if index >= self._starts[slot]:
                return self.band(slot)
        raise IndexError(index)

    def __eq__(self, other):
        return isinstance(other, SkewedBlocks) and other._widths == self._widths

    def __repr__(self):
        return f"SkewedBlocks(widths={self._widths})"


def block_index(vertex_label: str, layout, seed: int = DEFAULT_HASH_SEED) -> Band:
    """Resolve a vertex label to its storage band (total over all labels)."""
    slot = hash64(vertex_label, seed) % layout.slots
    return layout.band(slot)


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    i = 3
    while i * i <= n:
        if n % i == 0:
            return False
        i += 2
    return True


def first_primes(count: int) -> tuple[int, ...]:
    """The first `count` primes, ascending."""
    out = []
    n = 2
    while len(out) < count:
        if _is_prime(n):
            out.append(n)
        n += 1
    return tuple(out)


@dataclass(frozen=True)
class PrimeTable:
    """Fixed table mapping edge-label hash slots to primes."""

    primes: tuple[int, ...]

    def __post_init__(self):
        if not self.primes:
            raise ConfigError("prime table must not be empty")
        if len(set(self.primes)) != len(self.primes):
            raise ConfigError("prime table entries must be distinct")
        for p in self.primes:
            if not _is_prime(p):
                raise ConfigError(f"prime table entry {p} is not prime")

    def __len__(self):
        return len(self.primes)


def label_prime(edge_label: str, table: PrimeTable, seed: int = DEFAULT_HASH_SEED) -> int:
    """Map an edge label to its prime (equal labels always agree)."""
    return table.primes[hash64(edge_label, seed) % len(table.primes)]


@lru_cache(maxsize=32)
def _check_candidate_sequences(lcg: tuple[int, int, int], fingerprint_range: int, r: int):
    """Reject LCG constants that repeat a value within any candidate run.

    The fingerprint space is small, so direct enumeration over every possible
    seed is cheap and replaces an algebraic period argument.
    """
    for f in range(fingerprint_range):
        seq = lcg_sequence(f, r, lcg)
        if len(set(seq)) != r:
            raise ConfigError(
                f"lcg constants {lcg} repeat a candidate value within "
                f"length {r} for fingerprint seed {f}"
            )


@dataclass
class SketchConfig:
    """All tunables of the sketch.

    matrix_width: cells per matrix side.
    layout: block layout; defaults to a single block spanning the matrix.
    fingerprint_range: power of two, e.g. 256 for 8-bit fingerprints.
    candidate_length: addresses generated per vertex.
    sample_length: cells probed per insertion, at most candidate_length**2.
    window / subwindow: sliding-window span and slice, in time units.
    prime_count: edge-label hash range (= prime table length).
    primes: explicit prime table; defaults to the first prime_count primes.
    lcg: (multiplier, increment, modulus) of the candidate/sampling generator.
    hash_seed: seed shared by every hash call in the sketch.
    track_vertices: keep the hash -> (id, label) registry path queries need.
    product_byte_cap: optional split threshold for the per-slot prime product.
    """

    matrix_width: int
    layout: UniformBlocks | SkewedBlocks | None = None
    fingerprint_range: int = 256
    candidate_length: int = 16
    sample_length: int = 16
    window: int = 64
    subwindow: int = 8
    prime_count: int = 32
    primes: tuple[int, ...] | None = None
    lcg: tuple[int, int, int] = DEFAULT_LCG
    hash_seed: int = DEFAULT_HASH_SEED
    track_vertices: bool = True
    product_byte_cap: int | None = None
    prime_table: PrimeTable = field(init=False, repr=False)

    def __post_init__(self):
        d = self.matrix_width
        if d <= 0:
            raise ConfigError("matrix width must be positive")
        if self.layout is None:
            self.layout = UniformBlocks(d, d)
        if self.layout.matrix_width != d:
            raise ConfigError(
                f"layout covers {self.layout.matrix_width} rows, matrix width is {d}"
            )
        F = self.fingerprint_range
        if F < 2 or F & (F - 1):
            raise ConfigError("fingerprint range must be a power of two >= 2")
        r = self.candidate_length
        if r < 1:
            raise ConfigError("candidate list length must be >= 1")
        if not 1 <= self.sample_length <= r * r:
            raise ConfigError("sample length must be in [1, candidate_length^2]")
        if self.window <= 0 or self.subwindow <= 0 or self.window % self.subwindow:
            raise ConfigError("subwindow span must evenly divide the window span")
        mult, inc, mod = self.lcg
        if mod <= 0:
            raise ConfigError("lcg modulus must be positive")
        _check_candidate_sequences(tuple(self.lcg), F, r)
        if self.primes is None:
            self.primes = first_primes(self.prime_count)
        else:
            self.primes = tuple(self.primes)
            self.prime_count = len(self.primes)
        if len(self.primes) != self.prime_count:
            raise ConfigError("prime table length must equal prime_count")
        self.prime_table = PrimeTable(self.primes)
        if F * max(self.layout.widths) > HASH_RANGE:
            raise ConfigError("fingerprint range times block width exceeds hash range")
        narrow = [w for w in self.layout.widths if w < r]
        if narrow:
            warnings.warn(
                f"{len(narrow)} band(s) narrower than the candidate list "
                f"(width < {r}); candidate addresses will repeat",
                stacklevel=2,
            )

    @property
    def subwindow_count(self) -> int:
        return self.window // self.subwindow


@dataclass(frozen=True)
class HashedVertex:
    """A vertex after hashing: full hash, split parts, candidates, and band."""

    h: int
    s0: int
    f: int
    candidates: tuple[int, ...]
    band: Band


def precompute(vertex_id: str, vertex_label: str, cfg: SketchConfig) -> HashedVertex:
    """Hash a vertex and derive everything insertion and queries need."""
    h = hash64(vertex_id, cfg.hash_seed)
    s0, f = split_hash(h, cfg.fingerprint_range)
    band = block_index(vertex_label, cfg.layout, cfg.hash_seed)
    cands = candidate_list(f, s0, cfg.candidate_length, cfg.lcg, band.width)
    return HashedVertex(h, s0, f, cands, band)
