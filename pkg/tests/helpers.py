"""Shared test utilities: frozen configs, independent reference mechanisms."""

from __future__ import annotations

import itertools

from graphsketch import (EdgeItem, GraphSketch, RegressingClock, SketchConfig,
                         UniformBlocks, block_index, label_prime, precompute,
                         sample_sequence)
from graphsketch.matrix import visible_slots

# Verified once against the full v0..v99 x L0..L2 population plus edge labels
# e0..e4: no hash, signature, slot, or prime collisions under this seed.
COLLISION_FREE_SEED = 0


def collision_free_config(**overrides) -> SketchConfig:
    """A configuration wide enough that the fixed test population never merges."""
    kwargs = dict(
        matrix_width=1024,
        layout=UniformBlocks(1024, 128),
        fingerprint_range=1 << 16,
        candidate_length=16,
        sample_length=16,
        window=400,
        subwindow=100,
        prime_count=64,
        hash_seed=COLLISION_FREE_SEED,
    )
    kwargs.update(overrides)
    return SketchConfig(**kwargs)


def assert_collision_free(items, cfg) -> None:
    """Loudly verify the premise behind every exactness assertion."""
    seen_hash: dict[int, str] = {}
    seen_sig: dict[tuple, tuple] = {}
    vertex_labels: set[str] = set()
    edge_labels: set[str] = set()
    for it in items:
        vertex_labels.update((it.l_src, it.l_dst))
        edge_labels.add(it.l_e)
        for vid, lab in ((it.src, it.l_src), (it.dst, it.l_dst)):
            hv = precompute(vid, lab, cfg)
            assert seen_hash.setdefault(hv.h, vid) == vid, "vertex hash collision"
            sig = (hv.band.ordinal, hv.s0 % hv.band.width, hv.f)
            assert seen_sig.setdefault(sig, (vid, lab)) == (vid, lab), \
                f"vertex signature collision at {sig}"
    slots: dict[int, str] = {}
    for lab in vertex_labels:
        s = block_index(lab, cfg.layout, cfg.hash_seed).ordinal
        assert slots.setdefault(s, lab) == lab, "vertex label slot collision"
    primes: dict[int, str] = {}
    for le in edge_labels:
        p = label_prime(le, cfg.prime_table, cfg.hash_seed)
        assert primes.setdefault(p, le) == le, "edge label prime collision"


def tiny_config(**overrides) -> SketchConfig:
    """The worked-example geometry: d=6, b=3, F=8, r=2, s=2, k=4."""
    kwargs = dict(
        matrix_width=6,
        layout=UniformBlocks(6, 3),
        fingerprint_range=8,
        candidate_length=2,
        sample_length=2,
        window=8,
        subwindow=2,
        primes=(2, 3),
    )
    kwargs.update(overrides)
    return SketchConfig(**kwargs)


class EagerMirror:
    """Shift-per-boundary reference for the windowed counters.

    Physically rotates every tracked counter list at each subwindow boundary,
    which is the behavior lazy reconciliation must be equivalent to. Driven
    by insert receipts, so it shares placement but not the sliding logic
    under test.
    """

    def __init__(self, k: int):
        self.k = k
        self.segments: dict[tuple, list[list[int]]] = {}

    def slide(self, expired: int) -> None:
        if expired <= 0:
            return
        steps = min(expired, self.k)
        for slots in self.segments.values():
            for _ in range(steps):
                slots.pop(0)
                slots.append([0, 1])

    def bump(self, key: tuple, prime: int, weight: int) -> None:
        slots = self.segments.setdefault(
            key, [[0, 1] for _ in range(self.k)])
        slots[-1][0] += weight
        slots[-1][1] *= prime ** weight

    def expected(self, key: tuple) -> list[tuple[int, int]]:
        slots = self.segments.get(key)
        if slots is None:
            return [(0, 1)] * self.k
        return [tuple(s) for s in slots]


def assert_matches_mirror(sk: GraphSketch, mirror: EagerMirror) -> None:
    """Compare every live segment and pool entry with the eager reference."""
    k, epoch = sk.cfg.subwindow_count, sk.epoch
    seen = set()
    for row, col, slot, seg in sk.matrix.iter_segments():
        key = ("m", row, col, slot)
        seen.add(key)
        assert visible_slots(seg, epoch, k) == mirror.expected(key), key
    for (src_h, dst_h), entry in sk.pool.entries.items():
        key = ("p", src_h, dst_h)
        seen.add(key)
        assert visible_slots(entry, epoch, k) == mirror.expected(key), key
    assert seen >= set(mirror.segments), "mirror tracks a segment the sketch lost"


def replay_with_mirror(cfg: SketchConfig, events) -> GraphSketch:
    """Feed ('insert', item) / ('advance', t) events to a sketch and mirror,
    asserting segment-by-segment equality after every event."""
    sk = GraphSketch(cfg)
    mirror = EagerMirror(cfg.subwindow_count)
    for event in events:
        if event[0] == "insert":
            item = event[1]
            try:
                receipt = sk.insert(item)
            except RegressingClock:
                continue
            mirror.slide(receipt.expired)
            prime = label_prime(item.l_e, cfg.prime_table, cfg.hash_seed)
            if receipt.destination == "matrix":
                key = ("m", receipt.slot.row, receipt.slot.col, receipt.slot.slot)
            else:
                src = precompute(item.src, item.l_src, cfg)
                dst = precompute(item.dst, item.l_dst, cfg)
                key = ("p", src.h, dst.h)
            mirror.bump(key, prime, item.w)
        else:
            mirror.slide(sk.advance_time(event[1]))
        assert_matches_mirror(sk, mirror)
    return sk


def find_overflow_stream(cfg: SketchConfig):
    """Brute-force an endpoint set whose third edge overflows to the pool.

    Requires sample_length == 1 so one cell (two segments) is the only
    destination; returns (fillers, target) where both fillers land in the
    target's single sampled cell with mismatching fingerprints.
    """
    assert cfg.sample_length == 1
    target = ("tgtA", "tgtB")

    def placement(a, b):
        src = precompute(a, "L", cfg)
        dst = precompute(b, "L", cfg)
        pairs = sample_sequence(src.f, dst.f, 1, cfg.candidate_length, cfg.lcg)
        ai, bi = pairs[0]
        return (src.band.start + src.candidates[ai],
                dst.band.start + dst.candidates[bi],
                ai, bi, src.f, dst.f)

    t_row, t_col, t_ai, t_bi, t_fs, t_fd = placement(*target)
    fillers = []
    signatures = {(t_fs, t_fd, t_ai, t_bi)}
    for i, j in itertools.product(range(200), range(200)):
        a, b = f"fa{i}", f"fb{j}"
        row, col, ai, bi, fs, fd = placement(a, b)
        if (row, col) != (t_row, t_col):
            continue
        # fingerprints must differ on both sides so the fillers stay
        # invisible to the target's vertex queries as well
        if fs == t_fs or fd == t_fd:
            continue
        sig = (fs, fd, ai, bi)
        if sig in signatures:
            continue
        signatures.add(sig)
        fillers.append((a, b))
        if len(fillers) == 2:
            return fillers, target
    raise AssertionError("no overflow construction found; widen the search")


def items_from_pairs(pairs, label="L", edge_label="e", t=0, w=1):
    return [EdgeItem(a, b, label, label, edge_label, w, t) for a, b in pairs]
