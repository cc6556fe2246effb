"""Sketch-versus-oracle benchmark harness.

Feeds the same stream to a sketch and the exact store, samples a seeded
query set per kind, and compiles relative errors, reachability accuracy,
and sketch-side latency percentiles into an ErrorReport.
"""

from __future__ import annotations

import random
import time
from statistics import fmean, quantiles

from .errors import RegressingClock
from .hashing import SketchConfig
from .oracle import ErrorReport, ExactStore, ReachabilityStats
from .sketch import GraphSketch

WEIGHT_KINDS = ("vertex-out", "vertex-in", "label-out", "label-in",
                "edge", "edge-group", "subgraph")
ALL_KINDS = WEIGHT_KINDS + ("path",)


def ingest_pair(cfg: SketchConfig, items, oracle_cap: int | None = None):
    """Insert every item into a fresh sketch and exact store, in lockstep.

    Items older than the newest subwindow are rejected by both sides and
    counted once. Returns (sketch, oracle, rejected).
    """
    sketch = GraphSketch(cfg)
    oracle = ExactStore(cfg.window, cfg.subwindow, max_items=oracle_cap)
    rejected = 0
    for item in items:
        try:
            sketch.insert(item)
        except RegressingClock:
            rejected += 1
            continue
        oracle.insert(item)
    return sketch, oracle, rejected


def _population(items):
    seen = {}
    labels = {}
    elabels = {}
    pairs = {}
    for it in items:
        seen.setdefault(it.src, it.l_src)
        seen.setdefault(it.dst, it.l_dst)
        labels.setdefault(it.l_src, None)
        labels.setdefault(it.l_dst, None)
        elabels.setdefault(it.l_e, None)
        pairs.setdefault((it.src, it.l_src, it.dst, it.l_dst), None)
    vertices = list(seen.items())
    return vertices, list(labels), list(elabels), list(pairs)


def sample_queries(items, kind: str, count: int, rng: random.Random):
    """Build `count` query operand tuples of the given kind from a stream."""
    vertices, labels, _elabels, pairs = _population(items)
    if not vertices:
        return []
    out = []
    for _ in range(count):
        if kind in ("vertex-out", "vertex-in"):
            out.append(rng.choice(vertices))
        elif kind in ("label-out", "label-in"):
            out.append((rng.choice(labels),))
        elif kind == "edge":
            if pairs and rng.random() < 0.8:
                out.append(rng.choice(pairs))
            else:
                a, l_a = rng.choice(vertices)
                b, l_b = rng.choice(vertices)
                out.append((a, l_a, b, l_b))
        elif kind == "edge-group":
            v, l_v = rng.choice(vertices)
            out.append((v, l_v, rng.choice(labels)))
        elif kind == "path":
            a, l_a = rng.choice(vertices)
            b, l_b = rng.choice(vertices)
            out.append((a, l_a, b, l_b))
        elif kind == "subgraph":
            n_edges = rng.randint(1, min(3, len(pairs))) if pairs else 1
            out.append((tuple(rng.choice(pairs) for _ in range(n_edges)),))
        else:
            raise ValueError(f"unknown query kind {kind!r}")
    return out


def _eval_weight(sketch, oracle, kind, args, l_e):
    if kind == "vertex-out":
        est = sketch.vertex_out_weight(*args, l_e)
        truth = oracle.out_weight(args[0], l_e)
    elif kind == "vertex-in":
        est = sketch.vertex_in_weight(*args, l_e)
        truth = oracle.in_weight(args[0], l_e)
    elif kind == "label-out":
        est = sketch.label_out_weight(*args, l_e)
        truth = oracle.label_out_weight(args[0], l_e)
    elif kind == "label-in":
        est = sketch.label_in_weight(*args, l_e)
        truth = oracle.label_in_weight(args[0], l_e)
    elif kind == "edge":
        est = sketch.edge_weight(*args, l_e)
        truth = oracle.edge_weight(args[0], args[2], l_e)
    elif kind == "edge-group":
        est = sketch.edge_weight_to_label_group(*args, l_e)
        truth = oracle.edge_weight_to_label_group(args[0], args[2], l_e)
    elif kind == "subgraph":
        return sketch.subgraph_count(*args, l_e), oracle.subgraph_count(*args, l_e)
    else:
        raise ValueError(kind)
    value = est.w_l if l_e is not None else est.w
    return value, truth


def _timing_summary(samples_ns):
    if not samples_ns:
        return {}
    us = [s / 1000.0 for s in samples_ns]
    summary = {"mean": fmean(us), "max": max(us)}
    if len(us) >= 20:
        cuts = quantiles(us, n=100)
        summary.update({"p50": cuts[49], "p95": cuts[94], "p99": cuts[98]})
    return summary


def run_bench(cfg: SketchConfig, items, kinds=ALL_KINDS, per_kind: int = 500,
              seed: int = 0, with_labels: bool = False,
              oracle_cap: int | None = None, repeats: int = 1) -> ErrorReport:
    """Ingest, sample `per_kind` queries per kind, and compare answers.

    with_labels additionally runs a label-restricted variant of every kind,
    reported under "<kind>+label". repeats > 1 draws that many independent
    query sets and pools their errors (run-of-runs averaging). Reports are
    deterministic for a fixed seed, except for the timing section.
    """
    sketch, oracle, _rejected = ingest_pair(cfg, items, oracle_cap)
    live = oracle.live_items()
    elabels = sorted({it.l_e for it in live})
    report = ErrorReport()
    variants = [False, True] if with_labels and elabels else [False]

    for kind in kinds:
        queries = []
        for rep in range(repeats):
            queries.extend(sample_queries(live, kind, per_kind,
                                          random.Random(f"{seed}:{kind}:{rep}")))
        for labeled in variants:
            label_rng = random.Random(f"{seed}:labels")
            name = f"{kind}+label" if labeled else kind
            timings = []
            reach = ReachabilityStats() if kind == "path" else None
            stats = None if kind == "path" else report.stats_for(name)
            for args in queries:
                l_e = label_rng.choice(elabels) if labeled else None
                if kind == "path":
                    t0 = time.perf_counter_ns()
                    est = sketch.path_reachable(*args, l_e)
                    timings.append(time.perf_counter_ns() - t0)
                    reach.record(est, oracle.reachable(args[0], args[2], l_e))
                else:
                    t0 = time.perf_counter_ns()
                    est, truth = _eval_weight(sketch, oracle, kind, args, l_e)
                    timings.append(time.perf_counter_ns() - t0)
                    stats.record(est, truth)
            if kind == "path":
                report.reachability[name] = reach
            report.timing_us[name] = _timing_summary(timings)
    return report


def timed_ingest(sketch: GraphSketch, items, checkpoint: int | None = None):
    """Insert items, timing the run; returns (total_s, checkpoint_s, rejected).

    checkpoint_s is the elapsed time after the first `checkpoint` items, for
    latency-growth comparisons.
    """
    rejected = 0
    checkpoint_s = None
    t0 = time.perf_counter()
    for i, item in enumerate(items, start=1):
        try:
            sketch.insert(item)
        except RegressingClock:
            rejected += 1
        if checkpoint is not None and i == checkpoint:
            checkpoint_s = time.perf_counter() - t0
    return time.perf_counter() - t0, checkpoint_s, rejected
