"""The sketch facade: insertion pipeline and the query families.

A GraphSketch owns one storage matrix, one overflow pool, and (optionally)
a vertex registry for reachability queries. Insertions are serialized by the
caller; queries are pure reads and may run concurrently.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from . import hashing
from .errors import EmptyPattern, PathQueryDisabled, RegressingClock
from .hashing import HashedVertex, SketchConfig
from .matrix import MatrixSlot, StorageMatrix
from .pool import AdditionalPool

_PRECOMPUTE_CACHE_CAP = 1 << 18


@dataclass(frozen=True)
class EdgeItem:
    """One stream arrival: endpoints, labels, weight, and timestamp."""

    src: str
    dst: str
    l_src: str
    l_dst: str
    l_e: str
    w: int = 1
    t: int = 0


@dataclass(frozen=True)
class QueryResult:
    """Estimated weight, plus the label-restricted weight when one was asked."""

    w: int
    w_l: int | None = None


@dataclass(frozen=True)
class InsertReceipt:
    destination: str  # "matrix" or "pool"
    slot: MatrixSlot | None
    expired: int


class VertexRegistry:
    """hash -> (id, label), first registration wins; collisions are counted.

    A (band, fingerprint) side index supports resolving the partial vertex
    signatures recovered from matrix segments during reachability expansion.
    """

    def __init__(self):
        self.by_hash: dict[int, tuple[str, str]] = {}
        self.by_band_fp: dict[tuple[int, int], list[int]] = {}
        self.collisions = 0

    def __len__(self):
        return len(self.by_hash)

    def register(self, h: int, vertex_id: str, label: str, band: int, f: int) -> None:
        known = self.by_hash.get(h)
        if known is not None:
            if known != (vertex_id, label):
                self.collisions += 1
            return
        self.by_hash[h] = (vertex_id, label)
        self.by_band_fp.setdefault((band, f), []).append(h)

    def get(self, h: int) -> tuple[str, str] | None:
        return self.by_hash.get(h)

    def hashes_for(self, band: int, f: int) -> list[int]:
        return self.by_band_fp.get((band, f), [])


class GraphSketch:
    """Label-enabled, window-expiring summary of a directed edge stream."""

    def __init__(self, cfg: SketchConfig):
        self.cfg = cfg
        self.matrix = StorageMatrix(cfg)
        self.pool = AdditionalPool(cfg.subwindow_count, cfg.product_byte_cap)
        self.registry = VertexRegistry() if cfg.track_vertices else None
        self.items_inserted = 0
        self.matrix_items = 0
        self.pool_items = 0
        self.rejected_items = 0
        self.unresolved_successors = 0
        self._pre_cache: dict[tuple[str, str], HashedVertex] = {}
        self._prime_cache: dict[str, int] = {}

    # -- ingestion ---------------------------------------------------------

    def insert(self, item: EdgeItem) -> InsertReceipt:
        """Run the full insertion pipeline for one arrival.

        Slides the window to the item's timestamp, hashes both endpoints,
        probes the matrix, and falls back to the pool. Raises RegressingClock
        (and counts the rejection) for items older than the newest subwindow.
        """
        if item.w < 1:
            raise ValueError(f"item weight must be >= 1, got {item.w}")
        try:
            expired = self.matrix.slide_to(item.t)
        except RegressingClock:
            self.rejected_items += 1
            raise
        src = self._precompute(item.src, item.l_src)
        dst = self._precompute(item.dst, item.l_dst)
        prime = self._prime(item.l_e)
        slot = self.matrix.try_insert(src, dst, prime, item.w)
        if slot is None:
            self.pool.insert(src.h, dst.h, src.band.ordinal, dst.band.ordinal,
                             prime, item.w, self.matrix.epoch)
            self.pool_items += 1
            destination = "pool"
        else:
            self.matrix_items += 1
            destination = "matrix"
        if self.registry is not None:
            self.registry.register(src.h, item.src, item.l_src, src.band.ordinal, src.f)
            self.registry.register(dst.h, item.dst, item.l_dst, dst.band.ordinal, dst.f)
        self.items_inserted += 1
        return InsertReceipt(destination, slot, expired)

    def advance_time(self, now: int) -> int:
        """Slide the window without inserting; returns subwindows expired."""
        return self.matrix.slide_to(now)

    @property
    def epoch(self) -> int:
        return self.matrix.epoch

    @property
    def pool_fraction(self) -> float:
        return self.pool_items / self.items_inserted if self.items_inserted else 0.0

    # -- queries -----------------------------------------------------------

    def vertex_out_weight(self, v: str, l_v: str, l_e: str | None = None) -> QueryResult:
        """Estimated total weight of edges leaving v (upper bound)."""
        hv = self._precompute(v, l_v)
        prime = self._prime(l_e) if l_e is not None else None
        w = w_l = 0
        base = hv.band.start
        for i, cand in enumerate(hv.candidates):
            dw, dwl = self.matrix.scan_row_band((base + cand,), (i, hv.f), prime)
            w += dw
            w_l += dwl
        pw, pwl = self.pool.aggregate(self.epoch, src_hash=hv.h, prime=prime)
        return self._result(w + pw, w_l + pwl, l_e)

    def vertex_in_weight(self, v: str, l_v: str, l_e: str | None = None) -> QueryResult:
        """Estimated total weight of edges entering v (upper bound)."""
        hv = self._precompute(v, l_v)
        prime = self._prime(l_e) if l_e is not None else None
        w = w_l = 0
        base = hv.band.start
        for i, cand in enumerate(hv.candidates):
            dw, dwl = self.matrix.scan_col_band((base + cand,), (i, hv.f), prime)
            w += dw
            w_l += dwl
        pw, pwl = self.pool.aggregate(self.epoch, dst_hash=hv.h, prime=prime)
        return self._result(w + pw, w_l + pwl, l_e)

    def label_out_weight(self, l_v: str, l_e: str | None = None) -> QueryResult:
        """Estimated outgoing weight aggregated over all vertices labeled l_v."""
        band = hashing.block_index(l_v, self.cfg.layout, self.cfg.hash_seed)
        prime = self._prime(l_e) if l_e is not None else None
        w, w_l = self.matrix.scan_row_band(
            range(band.start, band.start + band.width), None, prime)
        pw, pwl = self.pool.aggregate(self.epoch, src_band=band.ordinal, prime=prime)
        return self._result(w + pw, w_l + pwl, l_e)

    def label_in_weight(self, l_v: str, l_e: str | None = None) -> QueryResult:
        """Incoming mirror of label_out_weight."""
        band = hashing.block_index(l_v, self.cfg.layout, self.cfg.hash_seed)
        prime = self._prime(l_e) if l_e is not None else None
        w, w_l = self.matrix.scan_col_band(
            range(band.start, band.start + band.width), None, prime)
        pw, pwl = self.pool.aggregate(self.epoch, dst_band=band.ordinal, prime=prime)
        return self._result(w + pw, w_l + pwl, l_e)

    def edge_weight(self, a: str, l_a: str, b: str, l_b: str,
                    l_e: str | None = None) -> QueryResult:
        """Estimated weight of the edge a -> b."""
        src = self._precompute(a, l_a)
        dst = self._precompute(b, l_b)
        prime = self._prime(l_e) if l_e is not None else None
        w, w_l = self.matrix.edge_weights(src, dst, prime)
        pw, pwl = self.pool.aggregate(self.epoch, src_hash=src.h, dst_hash=dst.h,
                                      prime=prime)
        return self._result(w + pw, w_l + pwl, l_e)

    def edge_weight_to_label_group(self, a: str, l_a: str, l_b: str,
                                   l_e: str | None = None) -> QueryResult:
        """Estimated weight from a to every vertex labeled l_b."""
        src = self._precompute(a, l_a)
        dst_band = hashing.block_index(l_b, self.cfg.layout, self.cfg.hash_seed)
        prime = self._prime(l_e) if l_e is not None else None
        w = w_l = 0
        base = src.band.start
        span = (dst_band.start, dst_band.start + dst_band.width)
        for i, cand in enumerate(src.candidates):
            dw, dwl = self.matrix.scan_row_band((base + cand,), (i, src.f), prime,
                                                col_range=span)
            w += dw
            w_l += dwl
        pw, pwl = self.pool.aggregate(self.epoch, src_hash=src.h,
                                      dst_band=dst_band.ordinal, prime=prime)
        return self._result(w + pw, w_l + pwl, l_e)

    def path_reachable(self, a: str, l_a: str, b: str, l_b: str,
                       l_e: str | None = None) -> bool:
        """BFS over the summarized graph; may overestimate, never misses.

        With l_e supplied only edges carrying positive weight under that
        label's prime are traversed. Requires vertex tracking.
        """
        if self.registry is None:
            raise PathQueryDisabled("path queries need track_vertices=True")
        prime = self._prime(l_e) if l_e is not None else None
        src = self._precompute(a, l_a)
        target = self._precompute(b, l_b)
        if src.h == target.h:
            return True
        visited = {src.h}
        queue = deque()
        queue.append(src)
        layout = self.cfg.layout
        while queue:
            cur = queue.popleft()
            if self.matrix.direct_edge_exists(cur, target, prime):
                return True
            for h in self.pool.successors(cur.h, self.epoch, prime):
                if h == target.h:
                    return True
                if h in visited:
                    continue
                visited.add(h)
                known = self.registry.get(h)
                if known is None:
                    self.unresolved_successors += 1
                    continue
                queue.append(self._precompute(*known))
            for col, i_dst, f_dst in self.matrix.successor_signatures(cur, prime):
                band = layout.band_of_index(col)
                addr = col - band.start
                if (band.ordinal == target.band.ordinal and f_dst == target.f
                        and target.candidates[i_dst] == addr):
                    return True
                resolved = False
                for h in self.registry.hashes_for(band.ordinal, f_dst):
                    known = self.registry.get(h)
                    cand = self._precompute(*known)
                    if cand.candidates[i_dst] != addr:
                        continue
                    resolved = True
                    if h not in visited:
                        visited.add(h)
                        queue.append(cand)
                if not resolved:
                    self.unresolved_successors += 1
        return False

    def subgraph_count(self, pattern, l_e: str | None = None) -> int:
        """Estimated match count of a pattern given as (x, l_x, y, l_y) edges.

        The minimum of the pattern's edge weights, with an early exit as soon
        as any edge is absent.
        """
        pattern = list(pattern)
        if not pattern:
            raise EmptyPattern("subgraph pattern must contain at least one edge")
        best = None
        for x, l_x, y, l_y in pattern:
            res = self.edge_weight(x, l_x, y, l_y, l_e)
            value = res.w_l if l_e is not None else res.w
            if value == 0:
                return 0
            best = value if best is None else min(best, value)
        return best

    # -- internals -----------------------------------------------------------

    def _precompute(self, vertex_id: str, label: str) -> HashedVertex:
        key = (vertex_id, label)
        hv = self._pre_cache.get(key)
        if hv is None:
            if len(self._pre_cache) >= _PRECOMPUTE_CACHE_CAP:
                self._pre_cache.clear()
            hv = hashing.precompute(vertex_id, label, self.cfg)
            self._pre_cache[key] = hv
        return hv

    def _prime(self, edge_label: str) -> int:
        p = self._prime_cache.get(edge_label)
        if p is None:
            p = hashing.label_prime(edge_label, self.cfg.prime_table, self.cfg.hash_seed)
            self._prime_cache[edge_label] = p
        return p

    @staticmethod
    def _result(w: int, w_l: int, l_e: str | None) -> QueryResult:
        return QueryResult(w, w_l if l_e is not None else None)
