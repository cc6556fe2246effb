"""Text formats: the stream file (CSV) and the key=value config file.

Stream files carry one arrival per line:

    src,dst,src_label,dst_label,edge_label,weight,timestamp

Labels are arbitrary non-comma strings; weight and timestamp are decimal
integers (weight >= 1). Lines starting with '#' and blank lines are ignored.
Timestamps should be non-decreasing; violations are reported, and items that
fall behind the newest subwindow are rejected at ingest.
"""

from __future__ import annotations

from typing import Iterable, Iterator

from .errors import ConfigError, StreamFormatError
from .hashing import SketchConfig, SkewedBlocks, UniformBlocks
from .sketch import EdgeItem

STREAM_HEADER = "# src,dst,src_label,dst_label,edge_label,weight,timestamp"


def format_item(item: EdgeItem) -> str:
    return (f"{item.src},{item.dst},{item.l_src},{item.l_dst},"
            f"{item.l_e},{item.w},{item.t}")


def write_stream(items: Iterable[EdgeItem], path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(STREAM_HEADER + "\n")
        for item in items:
            fh.write(format_item(item) + "\n")


def iter_stream(path) -> Iterator[tuple[int, EdgeItem]]:
    """Yield (line number, item); malformed lines raise StreamFormatError."""
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            fields = line.split(",")
            if len(fields) != 7:
                raise StreamFormatError(line_no, f"expected 7 fields, got {len(fields)}")
            src, dst, l_src, l_dst, l_e, w_s, t_s = fields
            if not src or not dst:
                raise StreamFormatError(line_no, "vertex ids must be non-empty")
            try:
                w = int(w_s)
                t = int(t_s)
            except ValueError:
                raise StreamFormatError(line_no, "weight and timestamp must be integers")
            if w < 1:
                raise StreamFormatError(line_no, "weight must be >= 1")
            if t < 0:
                raise StreamFormatError(line_no, "timestamp must be non-negative")
            yield line_no, EdgeItem(src, dst, l_src, l_dst, l_e, w, t)


def read_stream(path) -> list[EdgeItem]:
    return [item for _, item in iter_stream(path)]


def order_violations(path) -> list[int]:
    """Line numbers whose timestamp is smaller than the previous one."""
    out = []
    prev = None
    for line_no, item in iter_stream(path):
        if prev is not None and item.t < prev:
            out.append(line_no)
        prev = item.t
    return out


# -- config files -------------------------------------------------------------

_TRUE = {"1", "true", "yes", "on"}
_FALSE = {"0", "false", "no", "off"}


def _parse_int(value: str) -> int:
    return int(value, 16) if value.lower().startswith("0x") else int(value)


def read_config(path) -> SketchConfig:
    """Parse a flat key=value config file into a SketchConfig.

    Recognized keys: matrix_width, blocks (single | uniform:<width> |
    skewed:<w1,w2,...>), fingerprint_range, candidate_length, sample_length,
    window, subwindow, prime_count, primes, lcg, hash_seed, track_vertices,
    product_byte_cap.
    """
    raw: dict[str, str] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ConfigError(f"{path}: line {line_no}: expected key=value")
            key, _, value = line.partition("=")
            raw[key.strip()] = value.strip()

    known = {"matrix_width", "blocks", "fingerprint_range", "candidate_length",
             "sample_length", "window", "subwindow", "prime_count", "primes",
             "lcg", "hash_seed", "track_vertices", "product_byte_cap"}
    unknown = set(raw) - known
    if unknown:
        raise ConfigError(f"{path}: unknown config keys: {sorted(unknown)}")
    if "matrix_width" not in raw:
        raise ConfigError(f"{path}: matrix_width is required")

    try:
        d = _parse_int(raw["matrix_width"])
        kwargs: dict = {"matrix_width": d}
        blocks = raw.get("blocks", "single")
        if blocks == "single":
            kwargs["layout"] = UniformBlocks(d, d)
        elif blocks.startswith("uniform:"):
            kwargs["layout"] = UniformBlocks(d, _parse_int(blocks.split(":", 1)[1]))
        elif blocks.startswith("skewed:"):
            widths = [_parse_int(w) for w in blocks.split(":", 1)[1].split(",")]
            kwargs["layout"] = SkewedBlocks(widths)
        else:
            raise ConfigError(f"{path}: bad blocks spec {blocks!r}")
        for key in ("fingerprint_range", "candidate_length", "sample_length",
                    "window", "subwindow", "prime_count"):
            if key in raw:
                kwargs[key] = _parse_int(raw[key])
        if "primes" in raw:
            kwargs["primes"] = tuple(_parse_int(p) for p in raw["primes"].split(","))
        if "lcg" in raw:
            parts = [_parse_int(p) for p in raw["lcg"].split(",")]
            if len(parts) != 3:
                raise ConfigError(f"{path}: lcg needs multiplier,increment,modulus")
            kwargs["lcg"] = tuple(parts)
        if "hash_seed" in raw:
            kwargs["hash_seed"] = _parse_int(raw["hash_seed"])
        if "track_vertices" in raw:
            value = raw["track_vertices"].lower()
            if value not in _TRUE | _FALSE:
                raise ConfigError(f"{path}: track_vertices must be a boolean")
            kwargs["track_vertices"] = value in _TRUE
        if "product_byte_cap" in raw and raw["product_byte_cap"]:
            kwargs["product_byte_cap"] = _parse_int(raw["product_byte_cap"])
        return SketchConfig(**kwargs)
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(f"{path}: {exc}") from exc


def write_config(cfg: SketchConfig, path) -> None:
    layout = cfg.layout
    if isinstance(layout, UniformBlocks):
        blocks = ("single" if layout.slots == 1
                  else f"uniform:{layout.block_width}")
    else:
        blocks = "skewed:" + ",".join(str(w) for w in layout.widths)
    lines = [
        f"matrix_width={cfg.matrix_width}",
        f"blocks={blocks}",
        f"fingerprint_range={cfg.fingerprint_range}",
        f"candidate_length={cfg.candidate_length}",
        f"sample_length={cfg.sample_length}",
        f"window={cfg.window}",
        f"subwindow={cfg.subwindow}",
        f"primes={','.join(str(p) for p in cfg.primes)}",
        f"lcg={cfg.lcg[0]},{cfg.lcg[1]},{cfg.lcg[2]}",
        f"hash_seed={hex(cfg.hash_seed)}",
        f"track_vertices={'true' if cfg.track_vertices else 'false'}",
    ]
    if cfg.product_byte_cap is not None:
        lines.append(f"product_byte_cap={cfg.product_byte_cap}")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")
