"""Deterministic synthetic graph-stream generation.

Vertex labels are assigned once per vertex and reused on every appearance,
so streams are label-consistent. All randomness flows from one seeded
generator; equal specs produce identical streams.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .sketch import EdgeItem


@dataclass(frozen=True)
class StreamSpec:
    """Shape of a synthetic stream.

    skew: probability a vertex takes the majority label "L0" (0 = uniform).
    duplicates: probability an arrival repeats an earlier endpoint pair.
    span: timestamps are drawn from [0, span] and sorted.
    """

    vertices: int
    edges: int
    vertex_labels: int = 1
    edge_labels: int = 1
    skew: float = 0.0
    duplicates: float = 0.0
    span: int = 1000
    max_weight: int = 3
    seed: int = 0


def generate_stream(spec: StreamSpec) -> list[EdgeItem]:
    if spec.vertices < 1 or spec.edges < 0:
        raise ValueError("need at least one vertex and a non-negative edge count")
    if spec.vertex_labels < 1 or spec.edge_labels < 1:
        raise ValueError("label counts must be positive")
    if not (0.0 <= spec.skew <= 1.0 and 0.0 <= spec.duplicates <= 1.0):
        raise ValueError("skew and duplicate rate must lie in [0, 1]")
    if spec.span < 0 or spec.max_weight < 1:
        raise ValueError("span must be non-negative and max_weight positive")

    rng = np.random.default_rng(spec.seed)
    if spec.skew > 0.0 and spec.vertex_labels > 1:
        majority = rng.random(spec.vertices) < spec.skew
        minority = rng.integers(1, spec.vertex_labels, size=spec.vertices)
        label_idx = np.where(majority, 0, minority)
    else:
        label_idx = rng.integers(0, spec.vertex_labels, size=spec.vertices)
    names = [f"v{i}" for i in range(spec.vertices)]
    vlabels = [f"L{i}" for i in label_idx]

    times = np.sort(rng.integers(0, spec.span + 1, size=spec.edges))
    weights = rng.integers(1, spec.max_weight + 1, size=spec.edges)
    elabel_idx = rng.integers(0, spec.edge_labels, size=spec.edges)
    dup_flags = rng.random(spec.edges) < spec.duplicates
    src_draw = rng.integers(0, spec.vertices, size=spec.edges)
    dst_draw = rng.integers(0, spec.vertices, size=spec.edges)
    dup_pick = rng.random(spec.edges)

    items = []
    pairs: list[tuple[int, int]] = []
    for i in range(spec.edges):
        if dup_flags[i] and pairs:
            s, d = pairs[int(dup_pick[i] * len(pairs))]
        else:
            s, d = int(src_draw[i]), int(dst_draw[i])
            pairs.append((s, d))
        items.append(EdgeItem(names[s], names[d], vlabels[s], vlabels[d],
                              f"e{elabel_idx[i]}", int(weights[i]), int(times[i])))
    return items
