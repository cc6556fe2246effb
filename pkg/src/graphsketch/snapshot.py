"""Versioned binary snapshots of a sketch.

Layout: an 8-byte magic, a u16 version, then length-prefixed sections. Each
section is a 4-byte tag, a u64 payload length, and the payload. Sections:

    CFG   sketch configuration as UTF-8 JSON
    MAT   window clock plus every occupied matrix segment, sparse
    POOL  every overflow entry
    REG   the vertex registry, in registration order (absent when disabled)
    STA   ingest counters

Integers are little-endian. Strings are u32 length + UTF-8 bytes. Prime
products are u32 part count, then per part u32 length + unsigned big-endian
bytes, so arbitrary-precision counters round-trip exactly.
"""

from __future__ import annotations

import io
import json
import struct

from .errors import SnapshotError
from .hashing import SketchConfig, SkewedBlocks, UniformBlocks, block_index
from .matrix import CellSegment
from .pool import PoolEntry
from .sketch import GraphSketch

MAGIC = b"GSKSNAP\x00"
VERSION = 1


def _pack_str(buf, s: str) -> None:
    raw = s.encode("utf-8")
    buf.write(struct.pack("<I", len(raw)))
    buf.write(raw)


def _unpack_str(buf) -> str:
    (n,) = struct.unpack("<I", buf.read(4))
    return buf.read(n).decode("utf-8")


def _pack_product(buf, product) -> None:
    parts = product if isinstance(product, list) else (product,)
    buf.write(struct.pack("<I", len(parts)))
    for part in parts:
        raw = part.to_bytes((part.bit_length() + 7) // 8 or 1, "big")
        buf.write(struct.pack("<I", len(raw)))
        buf.write(raw)


def _unpack_product(buf):
    (count,) = struct.unpack("<I", buf.read(4))
    parts = []
    for _ in range(count):
        (n,) = struct.unpack("<I", buf.read(4))
        parts.append(int.from_bytes(buf.read(n), "big"))
    return parts if count > 1 else parts[0]


def _pack_counters(buf, obj, k: int) -> None:
    buf.write(struct.pack("<q", obj.last_epoch))
    for j in range(k):
        buf.write(struct.pack("<Q", obj.counts[j]))
        _pack_product(buf, obj.products[j])


def _unpack_counters(buf, obj, k: int) -> None:
    (obj.last_epoch,) = struct.unpack("<q", buf.read(8))
    for j in range(k):
        (obj.counts[j],) = struct.unpack("<Q", buf.read(8))
        obj.products[j] = _unpack_product(buf)


def _config_payload(cfg: SketchConfig) -> bytes:
    layout = cfg.layout
    if isinstance(layout, UniformBlocks):
        layout_doc = {"kind": "uniform", "block_width": layout.block_width}
    else:
        layout_doc = {"kind": "skewed", "widths": list(layout.widths)}
    doc = {
        "matrix_width": cfg.matrix_width,
        "layout": layout_doc,
        "fingerprint_range": cfg.fingerprint_range,
        "candidate_length": cfg.candidate_length,
        "sample_length": cfg.sample_length,
        "window": cfg.window,
        "subwindow": cfg.subwindow,
        "primes": list(cfg.primes),
        "lcg": list(cfg.lcg),
        "hash_seed": cfg.hash_seed,
        "track_vertices": cfg.track_vertices,
        "product_byte_cap": cfg.product_byte_cap,
    }
    return json.dumps(doc, sort_keys=True).encode("utf-8")


def _config_from_payload(payload: bytes) -> SketchConfig:
    doc = json.loads(payload.decode("utf-8"))
    layout_doc = doc["layout"]
    if layout_doc["kind"] == "uniform":
        layout = UniformBlocks(doc["matrix_width"], layout_doc["block_width"])
    else:
        layout = SkewedBlocks(layout_doc["widths"])
    return SketchConfig(
        matrix_width=doc["matrix_width"],
        layout=layout,
        fingerprint_range=doc["fingerprint_range"],
        candidate_length=doc["candidate_length"],
        sample_length=doc["sample_length"],
        window=doc["window"],
        subwindow=doc["subwindow"],
        primes=tuple(doc["primes"]),
        lcg=tuple(doc["lcg"]),
        hash_seed=doc["hash_seed"],
        track_vertices=doc["track_vertices"],
        product_byte_cap=doc["product_byte_cap"],
    )


def save_sketch(sketch: GraphSketch, path) -> None:
    k = sketch.cfg.subwindow_count
    sections: list[tuple[bytes, bytes]] = [(b"CFG ", _config_payload(sketch.cfg))]

    mat = io.BytesIO()
    t_n = sketch.matrix.t_n
    mat.write(struct.pack("<Bq", t_n is not None, t_n if t_n is not None else 0))
    mat.write(struct.pack("<Q", sketch.matrix.epoch))
    segments = list(sketch.matrix.iter_segments())
    mat.write(struct.pack("<I", len(segments)))
    for row, col, slot, seg in segments:
        mat.write(struct.pack("<IIBQQII", row, col, slot,
                              seg.f_src, seg.f_dst, seg.i_src, seg.i_dst))
        _pack_counters(mat, seg, k)
    sections.append((b"MAT ", mat.getvalue()))

    pool = io.BytesIO()
    pool.write(struct.pack("<I", len(sketch.pool.entries)))
    for entry in sketch.pool.entries.values():
        pool.write(struct.pack("<QQII", entry.src_hash, entry.dst_hash,
                               entry.src_band, entry.dst_band))
        _pack_counters(pool, entry, k)
    sections.append((b"POOL", pool.getvalue()))

    if sketch.registry is not None:
        reg = io.BytesIO()
        reg.write(struct.pack("<I", len(sketch.registry.by_hash)))
        for h, (vid, label) in sketch.registry.by_hash.items():
            reg.write(struct.pack("<Q", h))
            _pack_str(reg, vid)
            _pack_str(reg, label)
        reg.write(struct.pack("<Q", sketch.registry.collisions))
        sections.append((b"REG ", reg.getvalue()))

    sta = struct.pack("<QQQQQ", sketch.items_inserted, sketch.matrix_items,
                      sketch.pool_items, sketch.rejected_items,
                      sketch.unresolved_successors)
    sections.append((b"STA ", sta))

    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<H", VERSION))
        for tag, payload in sections:
            fh.write(tag)
            fh.write(struct.pack("<Q", len(payload)))
            fh.write(payload)


def load_sketch(path) -> GraphSketch:
    with open(path, "rb") as fh:
        data = fh.read()
    if data[:8] != MAGIC:
        raise SnapshotError("not a sketch snapshot (bad magic)")
    (version,) = struct.unpack_from("<H", data, 8)
    if version != VERSION:
        raise SnapshotError(f"unsupported snapshot version {version}")
    sections: dict[bytes, bytes] = {}
    offset = 10
    while offset < len(data):
        if offset + 12 > len(data):
            raise SnapshotError("truncated section header")
        tag = data[offset:offset + 4]
        (length,) = struct.unpack_from("<Q", data, offset + 4)
        offset += 12
        if offset + length > len(data):
            raise SnapshotError(f"truncated section {tag!r}")
        sections[tag] = data[offset:offset + length]
        offset += length
    for required in (b"CFG ", b"MAT ", b"POOL", b"STA "):
        if required not in sections:
            raise SnapshotError(f"missing section {required!r}")
    try:
        return _rebuild(sections)
    except (struct.error, ValueError, KeyError, UnicodeDecodeError) as exc:
        raise SnapshotError(f"corrupt snapshot: {exc}") from exc


def _rebuild(sections: dict[bytes, bytes]) -> GraphSketch:
    cfg = _config_from_payload(sections[b"CFG "])
    sketch = GraphSketch(cfg)
    k = cfg.subwindow_count

    mat = io.BytesIO(sections[b"MAT "])
    has_tn, t_n = struct.unpack("<Bq", mat.read(9))
    sketch.matrix.t_n = t_n if has_tn else None
    (sketch.matrix.epoch,) = struct.unpack("<Q", mat.read(8))
    (n_segments,) = struct.unpack("<I", mat.read(4))
    for _ in range(n_segments):
        row, col, slot, f_src, f_dst, i_src, i_dst = struct.unpack(
            "<IIBQQII", mat.read(33))
        seg = CellSegment(f_src, f_dst, i_src, i_dst, k, 0)
        _unpack_counters(mat, seg, k)
        row_cells = sketch.matrix.rows.setdefault(row, {})
        cell = row_cells.get(col)
        if cell is None:
            cell = [None, None]
            row_cells[col] = cell
            sketch.matrix.cols.setdefault(col, {})[row] = cell
        cell[slot] = seg
    sketch.matrix.segment_count = n_segments

    pool = io.BytesIO(sections[b"POOL"])
    (n_entries,) = struct.unpack("<I", pool.read(4))
    for _ in range(n_entries):
        src_hash, dst_hash, src_band, dst_band = struct.unpack("<QQII", pool.read(24))
        entry = PoolEntry(src_hash, dst_hash, src_band, dst_band, k, 0)
        _unpack_counters(pool, entry, k)
        sketch.pool.entries[(src_hash, dst_hash)] = entry
        sketch.pool.by_src.setdefault(src_hash, {})[dst_hash] = entry
        sketch.pool.by_dst.setdefault(dst_hash, {})[src_hash] = entry

    if b"REG " in sections and sketch.registry is not None:
        reg = io.BytesIO(sections[b"REG "])
        (n_vertices,) = struct.unpack("<I", reg.read(4))
        for _ in range(n_vertices):
            (h,) = struct.unpack("<Q", reg.read(8))
            vid = _unpack_str(reg)
            label = _unpack_str(reg)
            band = block_index(label, cfg.layout, cfg.hash_seed)
            sketch.registry.register(h, vid, label, band.ordinal,
                                     h % cfg.fingerprint_range)
        (sketch.registry.collisions,) = struct.unpack("<Q", reg.read(8))

    (sketch.items_inserted, sketch.matrix_items, sketch.pool_items,
     sketch.rejected_items, sketch.unresolved_successors) = struct.unpack(
        "<QQQQQ", sections[b"STA "])
    return sketch
