"""Seeded training/probe partitions of a graph's edge set."""
from __future__ import annotations

import dataclasses
import json
import math

import numpy as np

from .graph import Graph

__all__ = ["SplitError", "SplitResult", "probe_size", "split", "canonical_fixture",
           "CANONICAL_EDGES"]


class SplitError(ValueError):
    pass


@dataclasses.dataclass(frozen=True)
class SplitResult:
    train: Graph
    probe: np.ndarray  # (P, 2) id pairs, u < v, sorted
    seed: int
    probe_fraction: float

    def to_json(self) -> str:
        lab = self.train.labels
        return json.dumps({
            "seed": self.seed,
            "probe_fraction": self.probe_fraction,
            "train_edges": self.train.edge_labels(),
            "probe_edges": [[lab[u], lab[v]] for u, v in self.probe.tolist()],
        }, sort_keys=True)


def probe_size(m: int, probe_fraction: float) -> int:
    """Round-half-up of ``probe_fraction * m``."""
    return int(math.floor(probe_fraction * m + 0.5))


def split(g: Graph, probe_fraction: float = 0.1, seed: int = 0) -> SplitResult:
    """Hide a uniformly random ``probe_fraction`` of the edges.

    The probe edges are ``numpy.random.Generator(PCG64(seed)).choice(M, P,
    replace=False)`` applied to the sorted edge array, so a seed fixes the
    partition exactly. The training graph keeps every node, including any
    left isolated.
    """
    if not 0.0 < probe_fraction < 1.0:
        raise ValueError(f"probe_fraction must lie in (0, 1), got {probe_fraction}")
    if seed < 0:
        raise ValueError("seed must be non-negative")
    m = g.edge_count
    if m < 1:
        raise SplitError("graph has no edges to split")
    p = probe_size(m, probe_fraction)
    if p == 0:
        raise SplitError(f"probe set is empty: round({probe_fraction} * {m}) == 0")
    rng = np.random.Generator(np.random.PCG64(seed))
    chosen = np.sort(rng.choice(m, size=p, replace=False))
    mask = np.ones(m, dtype=bool)
    mask[chosen] = False
    train = Graph(g.node_count, g.edges[mask], g.labels)
    probe = g.edges[chosen].copy()
    probe.flags.writeable = False
    return SplitResult(train=train, probe=probe, seed=int(seed),
                       probe_fraction=float(probe_fraction))


# Eight-node worked example: v1 joins v2, v3, v4 (v2-v4 linked); v5, v6, v7
# form a triangle and v8 hangs off v6 and v7.
CANONICAL_EDGES = (
    ("v1", "v2"), ("v1", "v3"), ("v1", "v4"), ("v2", "v4"), ("v2", "v5"),
    ("v5", "v6"), ("v5", "v7"), ("v6", "v7"), ("v6", "v8"), ("v7", "v8"),
)


def canonical_fixture() -> Graph:
    """The 8-node, 10-edge worked-example graph; node ``i`` is ``v{i+1}``."""
    labels = [f"v{i}" for i in range(1, 9)]
    idx = {lab: i for i, lab in enumerate(labels)}
    return Graph.from_edges(8, [(idx[a], idx[b]) for a, b in CANONICAL_EDGES], labels)
