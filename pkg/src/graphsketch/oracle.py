"""Exact windowed multigraph reference with the same query surface.

Deliberately simple and memory-hungry: every in-window item is kept verbatim
so sketch answers can be checked against ground truth. Window arithmetic
mirrors the sketch's subwindow grid exactly (anchored at the first timestamp
seen, advancing in whole subwindow steps).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from statistics import fmean

from .errors import EmptyPattern, OracleCapExceeded, RegressingClock, ZeroTruth
from .sketch import EdgeItem


class ExactStore:
    """Ground-truth store over the live window."""

    def __init__(self, window: int, subwindow: int, max_items: int | None = None):
        if window <= 0 or subwindow <= 0 or window % subwindow:
            raise ValueError("subwindow span must evenly divide the window span")
        self.window = window
        self.subwindow = subwindow
        self.k = window // subwindow
        self.max_items = max_items
        self.t_n: int | None = None
        self.epoch = 0
        self.items: list[tuple[int, EdgeItem]] = []  # (epoch at insert, item)
        self.by_src: dict[str, list[int]] = {}
        self.by_dst: dict[str, list[int]] = {}
        self.by_pair: dict[tuple[str, str], list[int]] = {}
        self.rejected_items = 0
        self._adjacency_cache: tuple[tuple[int, str | None], dict] | None = None

    # -- ingestion ---------------------------------------------------------

    def slide_to(self, now: int) -> int:
        if self.t_n is None:
            self.t_n = now
            return 0
        if now < self.t_n:
            raise RegressingClock(
                f"timestamp {now} precedes newest subwindow start {self.t_n}"
            )
        expired = (now - self.t_n) // self.subwindow
        if expired:
            self.t_n += expired * self.subwindow
            self.epoch += expired
        return expired

    advance_time = slide_to

    def insert(self, item: EdgeItem) -> None:
        if self.max_items is not None and len(self.items) >= self.max_items:
            raise OracleCapExceeded(
                f"exact store is capped at {self.max_items} items"
            )
        try:
            self.slide_to(item.t)
        except RegressingClock:
            self.rejected_items += 1
            raise
        idx = len(self.items)
        self.items.append((self.epoch, item))
        self.by_src.setdefault(item.src, []).append(idx)
        self.by_dst.setdefault(item.dst, []).append(idx)
        self.by_pair.setdefault((item.src, item.dst), []).append(idx)
        self._adjacency_cache = None

    # -- liveness ----------------------------------------------------------

    def _live(self, insert_epoch: int) -> bool:
        return insert_epoch > self.epoch - self.k

    def live_items(self) -> list[EdgeItem]:
        return [it for e, it in self.items if self._live(e)]

    def _sum(self, indices, l_e: str | None) -> int:
        total = 0
        for idx in indices:
            epoch, it = self.items[idx]
            if self._live(epoch) and (l_e is None or it.l_e == l_e):
                total += it.w
        return total

    # -- queries -----------------------------------------------------------

    def out_weight(self, v: str, l_e: str | None = None) -> int:
        return self._sum(self.by_src.get(v, ()), l_e)

    def in_weight(self, v: str, l_e: str | None = None) -> int:
        return self._sum(self.by_dst.get(v, ()), l_e)

    def label_out_weight(self, l_v: str, l_e: str | None = None) -> int:
        return sum(it.w for e, it in self.items
                   if self._live(e) and it.l_src == l_v
                   and (l_e is None or it.l_e == l_e))

    def label_in_weight(self, l_v: str, l_e: str | None = None) -> int:
        return sum(it.w for e, it in self.items
                   if self._live(e) and it.l_dst == l_v
                   and (l_e is None or it.l_e == l_e))

    def edge_weight(self, a: str, b: str, l_e: str | None = None) -> int:
        return self._sum(self.by_pair.get((a, b), ()), l_e)

    def edge_weight_to_label_group(self, a: str, l_b: str,
                                   l_e: str | None = None) -> int:
        total = 0
        for idx in self.by_src.get(a, ()):
            epoch, it = self.items[idx]
            if self._live(epoch) and it.l_dst == l_b and (l_e is None or it.l_e == l_e):
                total += it.w
        return total

    def _adjacency(self, l_e: str | None) -> dict[str, set[str]]:
        key = (self.epoch, l_e)
        if self._adjacency_cache is not None and self._adjacency_cache[0] == key:
            return self._adjacency_cache[1]
        adj: dict[str, set[str]] = {}
        for epoch, it in self.items:
            if self._live(epoch) and (l_e is None or it.l_e == l_e):
                adj.setdefault(it.src, set()).add(it.dst)
        self._adjacency_cache = (key, adj)
        return adj

    def reachable(self, a: str, b: str, l_e: str | None = None) -> bool:
        if a == b:
            return True
        adj = self._adjacency(l_e)
        seen = {a}
        queue = deque((a,))
        while queue:
            cur = queue.popleft()
            for nxt in adj.get(cur, ()):
                if nxt == b:
                    return True
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append(nxt)
        return False

    def subgraph_count(self, pattern, l_e: str | None = None) -> int:
        pattern = list(pattern)
        if not pattern:
            raise EmptyPattern("subgraph pattern must contain at least one edge")
        best = None
        for x, _l_x, y, _l_y in pattern:
            w = self.edge_weight(x, y, l_e)
            if w == 0:
                return 0
            best = w if best is None else min(best, w)
        return best


# -- error metrics ----------------------------------------------------------

def relative_error(estimate: float, truth: float) -> float:
    """(estimate - truth) / truth; raises ZeroTruth when truth is zero."""
    if truth <= 0:
        raise ZeroTruth("relative error is undefined for zero ground truth")
    return (estimate - truth) / truth


def are(errors) -> float:
    """Average relative error over a non-empty collection."""
    errors = list(errors)
    if not errors:
        raise ValueError("ARE of an empty query set is undefined")
    return fmean(errors)


@dataclass
class QueryTypeStats:
    """Relative-error bookkeeping for one query kind."""

    kind: str
    errors: list[float] = field(default_factory=list)
    zero_truth: int = 0   # queries excluded because truth was 0
    false_hits: int = 0   # of those, how many the sketch answered with > 0

    def record(self, estimate: int, truth: int) -> None:
        if truth <= 0:
            self.zero_truth += 1
            if estimate > 0:
                self.false_hits += 1
            return
        self.errors.append(relative_error(estimate, truth))

    @property
    def queries(self) -> int:
        return len(self.errors) + self.zero_truth

    @property
    def are(self) -> float | None:
        return fmean(self.errors) if self.errors else None


@dataclass
class ReachabilityStats:
    """Reachability is judged on false positives only; misses are defects."""

    queries: int = 0
    oracle_true: int = 0
    oracle_false: int = 0
    false_positives: int = 0
    false_negatives: int = 0

    def record(self, estimate: bool, truth: bool) -> None:
        self.queries += 1
        if truth:
            self.oracle_true += 1
            if not estimate:
                self.false_negatives += 1
        else:
            self.oracle_false += 1
            if estimate:
                self.false_positives += 1

    @property
    def accuracy(self) -> float:
        if self.oracle_false == 0:
            return 1.0
        return 1.0 - self.false_positives / self.oracle_false


@dataclass
class ErrorReport:
    """Sketch-versus-oracle outcome of one benchmark run."""

    weights: dict[str, QueryTypeStats] = field(default_factory=dict)
    reachability: dict[str, ReachabilityStats] = field(default_factory=dict)
    timing_us: dict[str, dict[str, float]] = field(default_factory=dict)

    def stats_for(self, kind: str) -> QueryTypeStats:
        if kind not in self.weights:
            self.weights[kind] = QueryTypeStats(kind)
        return self.weights[kind]
