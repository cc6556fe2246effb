"""Closed-form collision probabilities and per-query accuracy bounds.

These evaluators answer "how likely is a random edge to merge with another
one", given the hash ranges and stream statistics, and turn that into the
accuracy guarantees of each query family. They are tuning aids and test
fixtures, entirely decoupled from the data path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import GraphSketchError


class InvalidProbabilities(GraphSketchError):
    """Case probabilities must be in [0,1] and sum to one."""


@dataclass
class CollisionParams:
    """Inputs to the collision model.

    vertex_range: size D of the vertex hash range.
    label_range: size L of the vertex-label hash range.
    edges: number of edges |E| in the stream.
    out_degree: out-degree d_v of the vertex at hand.
    q1, q2, q3: label-collision case probabilities for edges sharing no
        endpoint (both labels differ / one differs / both equal); sum to 1.
    h1, h2: the same for edges sharing one endpoint (other label differs /
        equal); sum to 1.
    vertices, avg_out_degree, pattern_size, edge_label_range, edge_labels:
        extra stream statistics consumed by the per-query bounds.
    """

    vertex_range: int
    label_range: int
    edges: int
    out_degree: int
    q1: float
    q2: float
    q3: float
    h1: float
    h2: float
    vertices: int | None = None
    avg_out_degree: float | None = None
    pattern_size: int | None = None
    edge_label_range: int | None = None
    edge_labels: int | None = None

    @classmethod
    def uniform_labels(cls, vertex_range: int, label_range: int, labels: int,
                       edges: int, out_degree: int, **extra) -> "CollisionParams":
        """Case probabilities for vertex labels drawn uniformly from `labels`."""
        if labels < 1:
            raise InvalidProbabilities("need at least one vertex label")
        l = labels
        return cls(
            vertex_range=vertex_range,
            label_range=label_range,
            edges=edges,
            out_degree=out_degree,
            q1=(l - 1) ** 2 / l**2,
            q2=2 * (l - 1) / l**2,
            q3=1 / l**2,
            h1=(l - 1) / l,
            h2=1 / l,
            **extra,
        )

    @classmethod
    def from_matrix_geometry(cls, matrix_width: int, fingerprint_range: int,
                             label_slots: int, labels: int, edges: int,
                             out_degree: int, **extra) -> "CollisionParams":
        """Derive D and L from the sketch geometry: D = d*F, L = slots*F."""
        return cls.uniform_labels(
            vertex_range=matrix_width * fingerprint_range,
            label_range=label_slots * fingerprint_range,
            labels=labels,
            edges=edges,
            out_degree=out_degree,
            **extra,
        )

    def validate(self) -> None:
        probs = (self.q1, self.q2, self.q3, self.h1, self.h2)
        if any(p < 0 or p > 1 for p in probs):
            raise InvalidProbabilities("case probabilities must lie in [0, 1]")
        if not math.isclose(self.q1 + self.q2 + self.q3, 1.0, abs_tol=1e-9):
            raise InvalidProbabilities("q1 + q2 + q3 must equal 1")
        if not math.isclose(self.h1 + self.h2, 1.0, abs_tol=1e-9):
            raise InvalidProbabilities("h1 + h2 must equal 1")
        if self.vertex_range <= 0 or self.label_range <= 0:
            raise InvalidProbabilities("hash ranges must be positive")
        if self.edges < 0 or self.out_degree < 0 or self.out_degree > self.edges:
            raise InvalidProbabilities("need 0 <= out_degree <= edges")


def collision_free_probability(params: CollisionParams) -> float:
    """Probability P that no other edge merges with a given edge.

    An edge sharing no endpoint collides with probability
    p1 = (q1 + L*q2 + L^2*q3) / (D^2 * L^2); an edge sharing one endpoint
    with probability p2 = (h1 + L*h2) / (D * L). Independence over the
    other |E| - d_v and d_v edges gives
    P = exp(-p1*(|E| - d_v) - p2*d_v).
    """
    params.validate()
    D = params.vertex_range
    L = params.label_range
    p1 = (params.q1 + L * params.q2 + L * L * params.q3) / (D * D * L * L)
    p2 = (params.h1 + L * params.h2) / (D * L)
    return math.exp(-p1 * (params.edges - params.out_degree)
                    - p2 * params.out_degree)


def query_error_bound(kind: str, labeled: bool, params: CollisionParams) -> float:
    """Lower bound on the accuracy of one query family.

    vertex: P^(|V| - d_v); edge: P; path: P^(|V| - d_a); subgraph: P^v.
    Label-restricted variants multiply by (1 - 1/c)^(edge_labels - 1) for the
    edge-label hash range c.
    """
    P = collision_free_probability(params)
    if kind == "vertex":
        if params.vertices is None:
            raise InvalidProbabilities("vertex bound needs the vertex count")
        bound = P ** (params.vertices - params.out_degree)
    elif kind == "edge":
        bound = P
    elif kind == "path":
        if params.vertices is None or params.avg_out_degree is None:
            raise InvalidProbabilities(
                "path bound needs the vertex count and average out-degree")
        bound = P ** (params.vertices - params.avg_out_degree)
    elif kind == "subgraph":
        if params.pattern_size is None:
            raise InvalidProbabilities("subgraph bound needs the pattern size")
        bound = P ** params.pattern_size
    else:
        raise ValueError(f"unknown query kind {kind!r}")
    if labeled:
        if params.edge_label_range is None or params.edge_labels is None:
            raise InvalidProbabilities(
                "labeled bounds need the edge-label hash range and label count")
        bound *= (1 - 1 / params.edge_label_range) ** (params.edge_labels - 1)
    return bound
