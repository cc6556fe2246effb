"""The block-partitioned storage matrix: twin-cell segments and dual counters.

Cells are allocated lazily in nested dicts, so memory tracks the number of
occupied cells rather than the full d*d grid. Subwindow expiry is lazy: the
matrix only advances a global epoch, and each segment reconciles its own
counter slots against that epoch when it is next written. Reads never mutate,
which keeps concurrent readers safe.
"""

from __future__ import annotations

from collections import namedtuple

from .errors import RegressingClock
from .hashing import HashedVertex, SketchConfig, sample_sequence

LOWER, HIGHER = 0, 1

# Where an accepted item landed: matrix coordinates, twin slot, probe rank.
MatrixSlot = namedtuple("MatrixSlot", "row col slot rank")


class CellSegment:
    """One twin slot: identity pairs plus k per-subwindow counter pairs.

    Counter slots are ordered oldest first; index k-1 is the newest
    subwindow. counts[j] accumulates arrival weight, products[j] the matching
    prime product (an int, or a list of ints when a byte cap splits it).
    last_epoch is the epoch the slots were last aligned to.
    """

    __slots__ = ("f_src", "f_dst", "i_src", "i_dst", "counts", "products", "last_epoch")

    def __init__(self, f_src, f_dst, i_src, i_dst, k, epoch):
        self.f_src = f_src
        self.f_dst = f_dst
        self.i_src = i_src
        self.i_dst = i_dst
        self.counts = [0] * k
        self.products = [1] * k
        self.last_epoch = epoch


def reconcile_segment(seg, epoch: int, k: int) -> None:
    """Align counter slots with the global epoch, dropping expired ones."""
    shift = epoch - seg.last_epoch
    if shift <= 0:
        return
    if shift >= k:
        seg.counts = [0] * k
        seg.products = [1] * k
    else:
        del seg.counts[:shift]
        seg.counts.extend([0] * shift)
        del seg.products[:shift]
        seg.products.extend([1] * shift)
    seg.last_epoch = epoch


def update_segment_counters(seg, epoch: int, k: int, prime: int, weight: int,
                            byte_cap: int | None = None) -> None:
    """Add a weighted, labeled arrival to the newest subwindow slot.

    Equivalent to repeating (C += 1, P *= prime) weight times.
    """
    reconcile_segment(seg, epoch, k)
    if weight == 0:
        return
    seg.counts[-1] += weight
    factor = prime ** weight
    current = seg.products[-1]
    if byte_cap is None:
        seg.products[-1] = current * factor
        return
    parts = current if isinstance(current, list) else [current]
    if parts[-1] != 1 and parts[-1].bit_length() >= byte_cap * 8:
        parts.append(factor)
    else:
        parts[-1] *= factor
    seg.products[-1] = parts


def _multiplicity(product, prime: int) -> int:
    count = 0
    parts = product if isinstance(product, list) else (product,)
    for part in parts:
        while part % prime == 0:
            count += 1
            part //= prime
    return count


def segment_weights(seg, epoch: int, k: int, prime: int | None = None) -> tuple[int, int]:
    """(total weight, weight under `prime`) visible in the current window.

    Pure read: expired slots are skipped, not cleared, so this is safe to call
    from any number of readers. Returns (0, 0) for an empty slot.
    """
    if seg is None:
        return 0, 0
    shift = epoch - seg.last_epoch
    if shift >= k:
        return 0, 0
    lo = shift if shift > 0 else 0
    counts = seg.counts
    w = sum(counts[lo:]) if lo else sum(counts)
    if prime is None or w == 0:
        return w, 0
    w_l = 0
    for j in range(lo, k):
        w_l += _multiplicity(seg.products[j], prime)
    return w, w_l


def visible_slots(seg, epoch: int, k: int) -> list[tuple[int, int]]:
    """The k (C, P) pairs as an eager shift-per-boundary store would hold them.

    Oldest first; expired slots appear as (0, 1). Split products are
    normalized back to a single integer.
    """
    out = [(0, 1)] * k
    if seg is None:
        return out
    shift = epoch - seg.last_epoch
    if shift >= k:
        return out
    lo = shift if shift > 0 else 0
    for j in range(lo, k):
        p = seg.products[j]
        if isinstance(p, list):
            acc = 1
            for part in p:
                acc *= part
            p = acc
        out[j - lo] = (seg.counts[j], p)
    return out


class StorageMatrix:
    """d x d sparse grid of twin cells, plus the sliding-window clock."""

    def __init__(self, cfg: SketchConfig):
        self.cfg = cfg
        self.k = cfg.subwindow_count
        self.rows: dict[int, dict[int, list]] = {}
        self.cols: dict[int, dict[int, list]] = {}
        self.t_n: int | None = None
        self.epoch = 0
        self.segment_count = 0
        self._sample_cache: dict[int, tuple] = {}

    # -- sliding ---------------------------------------------------------

    def slide_to(self, now: int) -> int:
        """Advance the window clock to `now`; returns subwindows expired.

        The first call anchors the subwindow grid at `now`. Afterwards the
        grid only moves forward in whole subwindow steps, exactly as a loop
        of single shifts would.
        """
        if self.t_n is None:
            self.t_n = now
            return 0
        if now < self.t_n:
            raise RegressingClock(
                f"timestamp {now} precedes newest subwindow start {self.t_n}"
            )
        expired = (now - self.t_n) // self.cfg.subwindow
        if expired:
            self.t_n += expired * self.cfg.subwindow
            self.epoch += expired
        return expired

    # -- insertion -------------------------------------------------------

    def _sample_pairs(self, f_src: int, f_dst: int):
        seed = f_src + f_dst
        pairs = self._sample_cache.get(seed)
        if pairs is None:
            pairs = sample_sequence(
                f_src, f_dst, self.cfg.sample_length, self.cfg.candidate_length, self.cfg.lcg
            )
            self._sample_cache[seed] = pairs
        return pairs

    def try_insert(self, src: HashedVertex, dst: HashedVertex, prime: int,
                   weight: int) -> MatrixSlot | None:
        """Probe the sampled cells in order; first fit or first match wins.

        Within a cell the lower twin segment is inspected before the higher
        one. Returns None when every probe fails (item belongs in the pool).
        """
        fs, fd = src.f, dst.f
        row0, col0 = src.band.start, dst.band.start
        scand, dcand = src.candidates, dst.candidates
        cap = self.cfg.product_byte_cap
        for rank, (ai, bi) in enumerate(self._sample_pairs(fs, fd)):
            row = row0 + scand[ai]
            col = col0 + dcand[bi]
            row_cells = self.rows.get(row)
            cell = row_cells.get(col) if row_cells is not None else None
            if cell is None:
                seg = CellSegment(fs, fd, ai, bi, self.k, self.epoch)
                update_segment_counters(seg, self.epoch, self.k, prime, weight, cap)
                cell = [seg, None]
                if row_cells is None:
                    row_cells = self.rows[row] = {}
                row_cells[col] = cell
                self.cols.setdefault(col, {})[row] = cell
                self.segment_count += 1
                return MatrixSlot(row, col, LOWER, rank)
            for slot in (LOWER, HIGHER):
                seg = cell[slot]
                if seg is None:
                    seg = CellSegment(fs, fd, ai, bi, self.k, self.epoch)
                    update_segment_counters(seg, self.epoch, self.k, prime, weight, cap)
                    cell[slot] = seg
                    self.segment_count += 1
                    return MatrixSlot(row, col, slot, rank)
                if (seg.f_src == fs and seg.f_dst == fd
                        and seg.i_src == ai and seg.i_dst == bi):
                    update_segment_counters(seg, self.epoch, self.k, prime, weight, cap)
                    return MatrixSlot(row, col, slot, rank)
        return None

    # -- scans -----------------------------------------------------------

    def scan_row_band(self, rows, match: tuple[int, int] | None = None,
                      prime: int | None = None,
                      col_range: tuple[int, int] | None = None) -> tuple[int, int]:
        """Aggregate weights over all cells in `rows`.

        With `match` = (ordinal, fingerprint) only segments whose stored
        source index and source fingerprint agree are counted; without it
        every occupied segment counts. `col_range` optionally restricts the
        scan to columns in [lo, hi).
        """
        w = w_l = 0
        epoch, k = self.epoch, self.k
        for row in rows:
            row_cells = self.rows.get(row)
            if not row_cells:
                continue
            for col, cell in row_cells.items():
                if col_range is not None and not col_range[0] <= col < col_range[1]:
                    continue
                for seg in cell:
                    if seg is None:
                        continue
                    if match is not None and (seg.i_src != match[0] or seg.f_src != match[1]):
                        continue
                    dw, dwl = segment_weights(seg, epoch, k, prime)
                    w += dw
                    w_l += dwl
        return w, w_l

    def scan_col_band(self, cols, match: tuple[int, int] | None = None,
                      prime: int | None = None) -> tuple[int, int]:
        """Column mirror of scan_row_band; `match` is destination-side."""
        w = w_l = 0
        epoch, k = self.epoch, self.k
        for col in cols:
            col_cells = self.cols.get(col)
            if not col_cells:
                continue
            for cell in col_cells.values():
                for seg in cell:
                    if seg is None:
                        continue
                    if match is not None and (seg.i_dst != match[0] or seg.f_dst != match[1]):
                        continue
                    dw, dwl = segment_weights(seg, epoch, k, prime)
                    w += dw
                    w_l += dwl
        return w, w_l

    def edge_weights(self, src: HashedVertex, dst: HashedVertex,
                     prime: int | None = None) -> tuple[int, int]:
        """Weights of the first sampled segment matching both identity pairs.

        Walks the same cells in the same order as insertion, so it finds
        exactly the segment an insertion of this endpoint pair would update.
        """
        fs, fd = src.f, dst.f
        row0, col0 = src.band.start, dst.band.start
        for ai, bi in self._sample_pairs(fs, fd):
            row = row0 + src.candidates[ai]
            col = col0 + dst.candidates[bi]
            row_cells = self.rows.get(row)
            cell = row_cells.get(col) if row_cells is not None else None
            if cell is None:
                continue
            for seg in cell:
                if (seg is not None and seg.f_src == fs and seg.f_dst == fd
                        and seg.i_src == ai and seg.i_dst == bi):
                    return segment_weights(seg, self.epoch, self.k, prime)
        return 0, 0

    def direct_edge_exists(self, src: HashedVertex, dst: HashedVertex,
                           prime: int | None = None) -> bool:
        """Check all r x r candidate cells for a both-pair match with weight.

        Used by reachability: a superset of the sampled cells, so nothing an
        insertion wrote can be missed.
        """
        fs, fd = src.f, dst.f
        row0, col0 = src.band.start, dst.band.start
        for i, ca in enumerate(src.candidates):
            row_cells = self.rows.get(row0 + ca)
            if not row_cells:
                continue
            for j, cb in enumerate(dst.candidates):
                cell = row_cells.get(col0 + cb)
                if cell is None:
                    continue
                for seg in cell:
                    if (seg is None or seg.f_src != fs or seg.f_dst != fd
                            or seg.i_src != i or seg.i_dst != j):
                        continue
                    w, w_l = segment_weights(seg, self.epoch, self.k, prime)
                    if (w_l if prime is not None else w) > 0:
                        return True
        return False

    def successor_signatures(self, src: HashedVertex, prime: int | None = None):
        """Destination signatures of live edges leaving `src`.

        Scans the source's candidate rows across every stored column and
        yields (column, stored destination ordinal, stored destination
        fingerprint) for each source-side match with positive weight.
        """
        out = []
        fs = src.f
        row0 = src.band.start
        epoch, k = self.epoch, self.k
        for i, ca in enumerate(src.candidates):
            row_cells = self.rows.get(row0 + ca)
            if not row_cells:
                continue
            for col, cell in row_cells.items():
                for seg in cell:
                    if seg is None or seg.i_src != i or seg.f_src != fs:
                        continue
                    w, w_l = segment_weights(seg, epoch, k, prime)
                    if (w_l if prime is not None else w) > 0:
                        out.append((col, seg.i_dst, seg.f_dst))
        return out

    # -- inspection ------------------------------------------------------

    def segment_at(self, row: int, col: int, slot: int):
        row_cells = self.rows.get(row)
        cell = row_cells.get(col) if row_cells is not None else None
        return cell[slot] if cell is not None else None

    def iter_segments(self):
        """Yield (row, col, slot, segment) for every occupied segment."""
        for row, row_cells in self.rows.items():
            for col, cell in row_cells.items():
                for slot in (LOWER, HIGHER):
                    if cell[slot] is not None:
                        yield row, col, slot, cell[slot]
