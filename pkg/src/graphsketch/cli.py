"""Command-line front end: ingest, query, bench, gen, stats.

Exit codes: 0 success, 1 usage or configuration error, 2 data error,
3 resource guard tripped.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from . import bench as bench_mod
from . import generator, snapshot, streamio
from .errors import (ConfigError, GraphSketchError, OracleCapExceeded,
                     RegressingClock, SnapshotError, StreamFormatError)
from .hashing import DEFAULT_HASH_SEED, hash64
from .sketch import GraphSketch

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_GUARD = 3


class UsageError(GraphSketchError):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage; this tool reserves 2 for data errors
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _emit(doc: dict, as_json: bool) -> None:
    if as_json:
        print(json.dumps(doc, sort_keys=True))
    else:
        for key, value in doc.items():
            print(f"{key}: {value}")


# -- ingest -------------------------------------------------------------------

def cmd_ingest(args) -> int:
    cfg = streamio.read_config(args.config)
    sketch = GraphSketch(cfg)
    rejected_lines = []
    violations = []
    prev_t = None
    count = 0
    t0 = time.perf_counter()
    for line_no, item in streamio.iter_stream(args.stream):
        if prev_t is not None and item.t < prev_t:
            violations.append(line_no)
        prev_t = item.t
        try:
            sketch.insert(item)
        except RegressingClock:
            rejected_lines.append(line_no)
        count += 1
    elapsed = time.perf_counter() - t0
    snapshot.save_sketch(sketch, args.out)
    report = {
        "items": count,
        "inserted": sketch.items_inserted,
        "matrix_items": sketch.matrix_items,
        "pool_items": sketch.pool_items,
        "pool_fraction": round(sketch.pool_fraction, 6),
        "rejected_items": len(rejected_lines),
        "rejected_lines": rejected_lines[:20],
        "order_violations": len(violations),
        "order_violation_lines": violations[:20],
        "subwindows_elapsed": sketch.epoch,
        "registry_size": len(sketch.registry) if sketch.registry else 0,
        "mean_insert_us": round(elapsed / count * 1e6, 3) if count else 0.0,
        "snapshot": str(args.out),
    }
    _emit(report, args.json)
    return EXIT_OK


# -- query --------------------------------------------------------------------

def parse_query(spec: str):
    """Parse one query line into (kind, operand tuple, optional edge label)."""
    fields = spec.strip().split(",")
    kind = fields[0]
    rest = fields[1:]

    def need(n):
        if len(rest) < n or len(rest) > n + 1 or any(not f for f in rest[:n]):
            raise UsageError(f"query {kind!r} takes {n} operands "
                             f"plus an optional edge label: {spec!r}")
        return tuple(rest[:n]), (rest[n] if len(rest) == n + 1 else None)

    if kind in ("vertex-out", "vertex-in"):
        ops, l_e = need(2)
    elif kind in ("label-out", "label-in"):
        ops, l_e = need(1)
    elif kind in ("edge", "path"):
        ops, l_e = need(4)
    elif kind == "edge-group":
        ops, l_e = need(3)
    elif kind == "subgraph":
        ops, l_e = need(1)
        edges = []
        for part in ops[0].split(";"):
            bits = part.split(":")
            if len(bits) != 4:
                raise UsageError(f"subgraph edge must be x:l_x:y:l_y, got {part!r}")
            edges.append(tuple(bits))
        ops = (tuple(edges),)
    else:
        raise UsageError(f"unknown query kind {kind!r}")
    return kind, ops, l_e


def run_query(sketch: GraphSketch, kind: str, ops, l_e: str | None) -> dict:
    if kind == "vertex-out":
        res = sketch.vertex_out_weight(*ops, l_e)
    elif kind == "vertex-in":
        res = sketch.vertex_in_weight(*ops, l_e)
    elif kind == "label-out":
        res = sketch.label_out_weight(*ops, l_e)
    elif kind == "label-in":
        res = sketch.label_in_weight(*ops, l_e)
    elif kind == "edge":
        res = sketch.edge_weight(*ops, l_e)
    elif kind == "edge-group":
        res = sketch.edge_weight_to_label_group(*ops, l_e)
    elif kind == "path":
        return {"kind": kind, "reachable": sketch.path_reachable(*ops, l_e)}
    elif kind == "subgraph":
        return {"kind": kind, "matches": sketch.subgraph_count(ops[0], l_e)}
    else:
        raise UsageError(f"unknown query kind {kind!r}")
    doc = {"kind": kind, "w": res.w}
    if res.w_l is not None:
        doc["w_l"] = res.w_l
    return doc


def _format_answer(doc: dict) -> str:
    if "reachable" in doc:
        return f"reachable={'true' if doc['reachable'] else 'false'}"
    if "matches" in doc:
        return f"matches={doc['matches']}"
    out = f"w={doc['w']}"
    if "w_l" in doc:
        out += f" w_l={doc['w_l']}"
    return out


def cmd_query(args) -> int:
    sketch = snapshot.load_sketch(args.snapshot)
    specs = []
    if args.spec:
        specs.append(args.spec)
    if args.batch:
        with open(args.batch, "r", encoding="utf-8") as fh:
            specs.extend(line.strip() for line in fh
                         if line.strip() and not line.startswith("#"))
    if not specs:
        raise UsageError("give a query spec or --batch file")
    for spec in specs:
        kind, ops, l_e = parse_query(spec)
        doc = run_query(sketch, kind, ops, l_e)
        print(json.dumps(doc, sort_keys=True) if args.json else _format_answer(doc))
    return EXIT_OK


# -- bench --------------------------------------------------------------------

def cmd_bench(args) -> int:
    cfg = streamio.read_config(args.config)
    items = streamio.read_stream(args.stream)
    kinds = tuple(args.queries.split(",")) if args.queries else bench_mod.ALL_KINDS
    for kind in kinds:
        if kind not in bench_mod.ALL_KINDS:
            raise UsageError(f"unknown query kind {kind!r}; "
                             f"choose from {', '.join(bench_mod.ALL_KINDS)}")
    report = bench_mod.run_bench(cfg, items, kinds=kinds, per_kind=args.per_kind,
                                 seed=args.seed, with_labels=args.with_labels,
                                 oracle_cap=args.oracle_cap, repeats=args.repeats)
    doc: dict = {"stream": str(args.stream), "items": len(items),
                 "per_kind": args.per_kind, "repeats": args.repeats,
                 "seed": args.seed}
    for name, stats in report.weights.items():
        doc[f"{name}.queries"] = stats.queries
        doc[f"{name}.are"] = (round(stats.are, 6) if stats.are is not None else None)
        doc[f"{name}.zero_truth"] = stats.zero_truth
        doc[f"{name}.false_hits"] = stats.false_hits
    for name, reach in report.reachability.items():
        doc[f"{name}.queries"] = reach.queries
        doc[f"{name}.accuracy"] = round(reach.accuracy, 6)
        doc[f"{name}.false_positives"] = reach.false_positives
        doc[f"{name}.false_negatives"] = reach.false_negatives
    for name, timing in report.timing_us.items():
        for stat, value in timing.items():
            doc[f"{name}.{stat}_us"] = round(value, 3)
    _emit(doc, args.json)
    return EXIT_OK


# -- gen ----------------------------------------------------------------------

def cmd_gen(args) -> int:
    spec = generator.StreamSpec(
        vertices=args.vertices, edges=args.edges,
        vertex_labels=args.vertex_labels, edge_labels=args.edge_labels,
        skew=args.skew, duplicates=args.duplicates, span=args.span,
        max_weight=args.max_weight, seed=args.seed)
    try:
        items = generator.generate_stream(spec)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    streamio.write_stream(items, args.out)
    _emit({"out": str(args.out), "items": len(items)}, args.json)
    return EXIT_OK


# -- stats --------------------------------------------------------------------

def _aligned_width(distinct_edges: int, slots: int | None) -> int:
    base = 1
    while base * base * 2 < distinct_edges:
        base += 1
    if slots:
        base += (-base) % slots
    return base


def cmd_stats(args) -> int:
    if args.snapshot:
        sketch = snapshot.load_sketch(args.snapshot)
        doc = {
            "matrix_width": sketch.cfg.matrix_width,
            "segments": sketch.matrix.segment_count,
            "pool_entries": len(sketch.pool),
            "items_inserted": sketch.items_inserted,
            "pool_fraction": round(sketch.pool_fraction, 6),
            "epoch": sketch.epoch,
            "newest_subwindow_start": sketch.matrix.t_n,
            "registry_size": len(sketch.registry) if sketch.registry else 0,
            "registry_collisions": (sketch.registry.collisions
                                    if sketch.registry else 0),
            "unresolved_successors": sketch.unresolved_successors,
        }
        _emit(doc, args.json)
        return EXIT_OK

    items = streamio.read_stream(args.stream)
    violations = streamio.order_violations(args.stream)
    vertex_label_of = {}
    vlabel_hist: dict[str, int] = {}
    elabel_hist: dict[str, int] = {}
    pairs = set()
    out_deg: dict[str, int] = {}
    for it in items:
        vertex_label_of.setdefault(it.src, it.l_src)
        vertex_label_of.setdefault(it.dst, it.l_dst)
        vlabel_hist[it.l_src] = vlabel_hist.get(it.l_src, 0) + 1
        vlabel_hist[it.l_dst] = vlabel_hist.get(it.l_dst, 0) + 1
        elabel_hist[it.l_e] = elabel_hist.get(it.l_e, 0) + 1
        pairs.add((it.src, it.dst))
        out_deg[it.src] = out_deg.get(it.src, 0) + 1
    slots = args.slots
    labels = sorted(vlabel_hist)
    doc = {
        "items": len(items),
        "distinct_vertices": len(vertex_label_of),
        "distinct_edges": len(pairs),
        "vertex_labels": len(labels),
        "edge_labels": len(elabel_hist),
        "order_violations": len(violations),
        "vertex_label_histogram": dict(sorted(vlabel_hist.items(),
                                              key=lambda kv: -kv[1])),
        "edge_label_histogram": dict(sorted(elabel_hist.items(),
                                            key=lambda kv: -kv[1])[:20]),
        "max_out_degree": max(out_deg.values(), default=0),
        "recommended_matrix_width": _aligned_width(len(pairs), slots),
        "advice": ("matrix capacity 2*d*d should be comparable to the distinct "
                   "edge count; enlarge d when using many label blocks"),
    }
    if slots:
        doc["label_slots"] = {label: hash64(label, args.hash_seed) % slots
                              for label in labels}
    _emit(doc, args.json)
    return EXIT_OK


# -- wiring ---------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="graphsketch",
                     description="Labeled graph-stream sketch tools")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="ingest a stream file into a snapshot")
    p.add_argument("--config", required=True)
    p.add_argument("--stream", required=True)
    p.add_argument("--out", required=True, help="snapshot path to write")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("query", help="answer queries against a snapshot")
    p.add_argument("snapshot")
    p.add_argument("spec", nargs="?", help="query spec, e.g. edge,a,l1,b,l2")
    p.add_argument("--batch", help="file with one query spec per line")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("bench", help="compare sketch answers with exact ones")
    p.add_argument("--config", required=True)
    p.add_argument("--stream", required=True)
    p.add_argument("--queries", help="comma-separated kinds (default: all)")
    p.add_argument("--per-kind", type=int, default=500,
                   help="queries per kind in one run")
    p.add_argument("--repeats", type=int, default=1,
                   help="independent query runs to pool into the ARE")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--with-labels", action="store_true",
                   help="also run label-restricted variants")
    p.add_argument("--oracle-cap", type=int, default=2_000_000,
                   help="max items the exact store may hold")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("gen", help="generate a synthetic stream file")
    p.add_argument("--out", required=True)
    p.add_argument("--vertices", type=int, required=True)
    p.add_argument("--edges", type=int, required=True)
    p.add_argument("--vertex-labels", type=int, default=1)
    p.add_argument("--edge-labels", type=int, default=1)
    p.add_argument("--skew", type=float, default=0.0)
    p.add_argument("--duplicates", type=float, default=0.0)
    p.add_argument("--span", type=int, default=1000)
    p.add_argument("--max-weight", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("stats", help="describe a stream file or snapshot")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--stream")
    group.add_argument("--snapshot")
    p.add_argument("--slots", type=int,
                   help="also show label -> block slot assignments")
    p.add_argument("--hash-seed", type=lambda v: int(v, 0),
                   default=DEFAULT_HASH_SEED)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_stats)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OracleCapExceeded as exc:
        print(f"resource guard: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except (StreamFormatError, SnapshotError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except FileNotFoundError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
