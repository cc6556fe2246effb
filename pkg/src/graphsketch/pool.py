"""Overflow storage for items the matrix rejected.

Entries are exact: keyed by the endpoint hash pair, never merged further.
Counter slots and lazy epoch reconciliation are shared with the matrix so
both structures expose identical window boundaries.
"""

from __future__ import annotations

from .matrix import segment_weights, update_segment_counters


class PoolEntry:
    __slots__ = ("src_hash", "dst_hash", "src_band", "dst_band",
                 "counts", "products", "last_epoch")

    def __init__(self, src_hash, dst_hash, src_band, dst_band, k, epoch):
        self.src_hash = src_hash
        self.dst_hash = dst_hash
        self.src_band = src_band
        self.dst_band = dst_band
        self.counts = [0] * k
        self.products = [1] * k
        self.last_epoch = epoch


class AdditionalPool:
    """Adjacency-shaped map of overflow entries with a reverse index."""

    def __init__(self, k: int, product_byte_cap: int | None = None):
        self.k = k
        self.product_byte_cap = product_byte_cap
        self.entries: dict[tuple[int, int], PoolEntry] = {}
        self.by_src: dict[int, dict[int, PoolEntry]] = {}
        self.by_dst: dict[int, dict[int, PoolEntry]] = {}

    def __len__(self):
        return len(self.entries)

    def insert(self, src_hash: int, dst_hash: int, src_band: int, dst_band: int,
               prime: int, weight: int, epoch: int) -> PoolEntry:
        """Find or create the entry for this endpoint pair and bump it."""
        key = (src_hash, dst_hash)
        entry = self.entries.get(key)
        if entry is None:
            entry = PoolEntry(src_hash, dst_hash, src_band, dst_band, self.k, epoch)
            self.entries[key] = entry
            self.by_src.setdefault(src_hash, {})[dst_hash] = entry
            self.by_dst.setdefault(dst_hash, {})[src_hash] = entry
        update_segment_counters(entry, epoch, self.k, prime, weight,
                                self.product_byte_cap)
        return entry

    def aggregate(self, epoch: int, src_hash: int | None = None,
                  dst_hash: int | None = None, src_band: int | None = None,
                  dst_band: int | None = None,
                  prime: int | None = None) -> tuple[int, int]:
        """Sum (w, w_l) over entries passing every supplied filter."""
        if src_hash is not None and dst_hash is not None:
            entry = self.entries.get((src_hash, dst_hash))
            candidates = () if entry is None else (entry,)
        elif src_hash is not None:
            candidates = self.by_src.get(src_hash, {}).values()
        elif dst_hash is not None:
            candidates = self.by_dst.get(dst_hash, {}).values()
        else:
            candidates = self.entries.values()
        w = w_l = 0
        for entry in candidates:
            if src_band is not None and entry.src_band != src_band:
                continue
            if dst_band is not None and entry.dst_band != dst_band:
                continue
            dw, dwl = segment_weights(entry, epoch, self.k, prime)
            w += dw
            w_l += dwl
        return w, w_l

    def successors(self, src_hash: int, epoch: int,
                   prime: int | None = None) -> list[int]:
        """Destination hashes reachable from src_hash with live weight."""
        out = []
        for dst_hash, entry in self.by_src.get(src_hash, {}).items():
            w, w_l = segment_weights(entry, epoch, self.k, prime)
            if (w_l if prime is not None else w) > 0:
                out.append(dst_hash)
        return out
