"""Undirected simple graphs: ingestion, giant component and topology statistics."""
from __future__ import annotations

import dataclasses
import io
import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from typing import Iterable, Sequence

import numpy as np
from scipy import sparse
from scipy.sparse import csgraph

__all__ = [
    "Graph",
    "EdgeListParseError",
    "StatsError",
    "NetworkStats",
    "load_edge_list",
    "read_edge_list",
    "giant_component",
    "common_neighbors",
    "all_pairs_distances",
    "network_stats",
    "erdos_renyi",
]

COMMENT_PREFIXES = ("#", "%")


class EdgeListParseError(ValueError):
    """Raised for a malformed line in an edge-list file."""

    def __init__(self, lineno: int, line: str):
        super().__init__(f"line {lineno}: expected two node labels, got {line.strip()!r}")
        self.lineno = lineno


class StatsError(ValueError):
    pass


class Graph:
    """Immutable undirected simple graph on dense node ids ``0..N-1``.

    Edges are stored once as ``(u, v)`` with ``u < v``, sorted
    lexicographically. ``labels[i]`` is the original label of node ``i``.
    Build instances with :meth:`from_edges` or :func:`load_edge_list`.
    """

    __slots__ = ("_n", "_edges", "_nbrs", "_nbr_sets", "_degrees", "_labels",
                 "_index", "_csr")

    def __init__(self, n: int, edges: np.ndarray, labels: Sequence[str] | None = None):
        edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        if labels is None:
            labels = [str(i) for i in range(n)]
        if len(labels) != n:
            raise ValueError("labels must have one entry per node")
        self._n = int(n)
        self._edges = edges
        self._edges.flags.writeable = False
        self._labels = tuple(labels)
        self._index = {lab: i for i, lab in enumerate(self._labels)}
        if len(self._index) != n:
            raise ValueError("node labels must be unique")

        rows = np.concatenate([edges[:, 0], edges[:, 1]])
        cols = np.concatenate([edges[:, 1], edges[:, 0]])
        csr = sparse.csr_matrix(
            (np.ones(rows.size, dtype=np.float64), (rows, cols)), shape=(n, n))
        csr.sort_indices()
        self._csr = csr
        self._degrees = np.diff(csr.indptr).astype(np.int64)
        self._degrees.flags.writeable = False
        self._nbrs = tuple(csr.indices[csr.indptr[i]:csr.indptr[i + 1]].astype(np.int64)
                           for i in range(n))
        self._nbr_sets = tuple(frozenset(a.tolist()) for a in self._nbrs)

    @classmethod
    def from_edges(cls, n: int, pairs: Iterable[tuple[int, int]],
                   labels: Sequence[str] | None = None) -> "Graph":
        """Build a graph from id pairs, dropping self-loops and duplicates."""
        arr = np.asarray(list(pairs), dtype=np.int64).reshape(-1, 2)
        if arr.size and (arr.min() < 0 or arr.max() >= n):
            raise ValueError("edge endpoint out of range")
        arr = arr[arr[:, 0] != arr[:, 1]]
        arr = np.sort(arr, axis=1)
        if arr.size:
            arr = np.unique(arr, axis=0)
        return cls(n, arr, labels)

    @property
    def node_count(self) -> int:
        return self._n

    @property
    def edge_count(self) -> int:
        return int(self._edges.shape[0])

    @property
    def edges(self) -> np.ndarray:
        """``(M, 2)`` array of ``(u, v)`` pairs with ``u < v``, sorted."""
        return self._edges

    @property
    def degrees(self) -> np.ndarray:
        return self._degrees

    @property
    def labels(self) -> tuple[str, ...]:
        return self._labels

    def neighbors(self, x: int) -> np.ndarray:
        """Sorted neighbor ids of ``x``."""
        return self._nbrs[self._check(x)]

    def neighbor_set(self, x: int) -> frozenset:
        return self._nbr_sets[self._check(x)]

    def has_edge(self, x: int, y: int) -> bool:
        return self._check(y) in self._nbr_sets[self._check(x)]

    def node_id(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise KeyError(f"unknown node label {label!r}") from None

    def adjacency_matrix(self) -> sparse.csr_matrix:
        """Symmetric 0/1 CSR adjacency (float64, sorted indices). Do not mutate."""
        return self._csr

    def edge_labels(self) -> list[tuple[str, str]]:
        lab = self._labels
        return [(lab[u], lab[v]) for u, v in self._edges.tolist()]

    def _check(self, x) -> int:
        if not isinstance(x, (int, np.integer)) or not 0 <= x < self._n:
            raise IndexError(f"invalid node id {x!r} for graph with {self._n} nodes")
        return int(x)

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return (self._n == other._n and self._labels == other._labels
                and np.array_equal(self._edges, other._edges))

    def __hash__(self):
        return hash((self._n, self._labels, self._edges.tobytes()))

    def __repr__(self):
        return f"Graph(N={self._n}, M={self.edge_count})"


def load_edge_list(text: str | io.TextIOBase | Iterable[str]) -> Graph:
    """Parse a whitespace-separated edge list.

    Lines starting with ``#`` or ``%`` and blank lines are skipped. Tokens
    after the first two on a line are ignored (e.g. weights). Self-loops and
    repeated edges are dropped. Node ids follow first appearance.

    >>> g = load_edge_list("a b\\nb c\\na b\\nc c")
    >>> g.node_count, g.edge_count
    (3, 2)
    """
    lines = text.splitlines() if isinstance(text, str) else text
    index: dict[str, int] = {}
    pairs = []
    for lineno, line in enumerate(lines, start=1):
        s = line.strip()
        if not s or s.startswith(COMMENT_PREFIXES):
            continue
        tok = s.split()
        if len(tok) < 2:
            raise EdgeListParseError(lineno, line)
        a = index.setdefault(tok[0], len(index))
        b = index.setdefault(tok[1], len(index))
        pairs.append((a, b))
    labels = sorted(index, key=index.__getitem__)
    return Graph.from_edges(len(labels), pairs, labels)


def read_edge_list(path: str | os.PathLike) -> Graph:
    with open(path, encoding="utf-8") as fh:
        return load_edge_list(fh)


def _components(g: Graph) -> tuple[int, np.ndarray]:
    return csgraph.connected_components(g.adjacency_matrix(), directed=False)


def giant_component(g: Graph) -> Graph:
    """Induced subgraph on the largest connected component.

    Equal-sized components are resolved in favour of the one holding the
    lexicographically smallest label. Node order and labels are preserved.
    """
    if g.node_count == 0:
        return g
    ncomp, comp = _components(g)
    if ncomp == 1:
        return g
    sizes = np.bincount(comp, minlength=ncomp)
    best = sizes.max()
    tied = np.flatnonzero(sizes == best)
    if tied.size > 1:
        labels = g.labels
        minlab = {c: min(labels[i] for i in np.flatnonzero(comp == c)) for c in tied}
        chosen = min(tied, key=minlab.__getitem__)
    else:
        chosen = tied[0]
    keep = np.flatnonzero(comp == chosen)
    remap = np.full(g.node_count, -1, dtype=np.int64)
    remap[keep] = np.arange(keep.size)
    e = g.edges
    mask = (remap[e[:, 0]] >= 0) & (remap[e[:, 1]] >= 0)
    sub = remap[e[mask]]
    return Graph(keep.size, sub, [g.labels[i] for i in keep])


def common_neighbors(g: Graph, x: int, y: int) -> frozenset:
    """Γ(x) ∩ Γ(y); defined whether or not ``x`` and ``y`` are adjacent."""
    if x == y:
        raise ValueError("common_neighbors needs two distinct nodes")
    return g.neighbor_set(x) & g.neighbor_set(y)


def all_pairs_distances(g: Graph, sources: Sequence[int] | None = None) -> np.ndarray:
    """Hop distances from each source (default: all nodes); ``inf`` if unreachable."""
    if g.node_count == 0:
        return np.zeros((0, 0))
    return csgraph.shortest_path(g.adjacency_matrix(), method="D", directed=False,
                                 unweighted=True, indices=sources)


@dataclasses.dataclass(frozen=True)
class NetworkStats:
    n: int
    m: int
    efficiency: float
    clustering: float
    assortativity: float
    heterogeneity: float
    avg_degree: float
    avg_distance: float

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    def to_json(self) -> str:
        # NaN assortativity serializes as null
        d = {k: (None if isinstance(v, float) and math.isnan(v) else v)
             for k, v in self.to_dict().items()}
        return json.dumps(d, sort_keys=True)


def local_clustering(g: Graph) -> np.ndarray:
    """Per-node clustering coefficient; 0 where degree < 2."""
    a = g.adjacency_matrix()
    tri = np.asarray((a @ a).multiply(a).sum(axis=1)).ravel() / 2.0
    k = g.degrees.astype(np.float64)
    pairs = k * (k - 1) / 2.0
    out = np.zeros(g.node_count)
    np.divide(tri, pairs, out=out, where=pairs > 0)
    return out


def _distance_block(g: Graph, lo: int, hi: int) -> tuple[float, float, int]:
    d = all_pairs_distances(g, np.arange(lo, hi))
    d[np.arange(hi - lo), np.arange(lo, hi)] = np.inf
    finite = np.isfinite(d)
    return float(np.sum(1.0 / d)), float(d[finite].sum()), int(finite.sum())


def network_stats(g: Graph, threads: int = 1, block: int = 256) -> NetworkStats:
    """Topology summary: efficiency, clustering, assortativity, heterogeneity,
    mean degree and mean finite distance.

    The clustering coefficient is the mean local clustering over nodes of
    degree >= 2. Distances are accumulated per fixed block of source nodes
    and summed in block order, so the result does not depend on ``threads``.
    """
    n, m = g.node_count, g.edge_count
    if n < 2:
        raise StatsError("network statistics need at least two nodes")
    starts = list(range(0, n, block))
    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            parts = list(pool.map(lambda s: _distance_block(g, s, min(s + block, n)), starts))
    else:
        parts = [_distance_block(g, s, min(s + block, n)) for s in starts]
    inv_sum = sum(p[0] for p in parts)
    d_sum = sum(p[1] for p in parts)
    d_cnt = sum(p[2] for p in parts)
    efficiency = inv_sum / (n * (n - 1))
    avg_distance = d_sum / d_cnt if d_cnt else math.nan

    k = g.degrees.astype(np.float64)
    cc = local_clustering(g)
    eligible = k >= 2
    clustering = float(cc[eligible].mean()) if eligible.any() else 0.0

    avg_degree = float(k.mean())
    heterogeneity = float((k ** 2).mean() / avg_degree ** 2) if avg_degree > 0 else math.nan
    return NetworkStats(n=n, m=m, efficiency=efficiency, clustering=clustering,
                        assortativity=degree_assortativity(g),
                        heterogeneity=heterogeneity, avg_degree=avg_degree,
                        avg_distance=avg_distance)


def degree_assortativity(g: Graph) -> float:
    """Pearson correlation of endpoint degrees over edges; NaN if undefined."""
    if g.edge_count == 0:
        return math.nan
    k = g.degrees.astype(np.float64)
    j1 = k[g.edges[:, 0]]
    j2 = k[g.edges[:, 1]]
    x = np.concatenate([j1, j2])
    y = np.concatenate([j2, j1])
    x = x - x.mean()
    y = y - y.mean()
    den = math.sqrt(float(x @ x) * float(y @ y))
    if den == 0.0:
        return math.nan
    return float(x @ y) / den


def erdos_renyi(n: int, p: float, seed: int) -> Graph:
    """G(n, p) random graph; the seed fully determines the edge set."""
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    rng = np.random.default_rng(seed)
    total = n * (n - 1) // 2
    m = int(rng.binomial(total, p)) if total else 0
    flat = np.sort(rng.choice(total, size=m, replace=False)) if m else np.zeros(0, np.int64)
    # row i owns flat indices [i*n - i*(i+1)/2, ...) in the row-major upper triangle
    i = (n - 2 - np.floor(np.sqrt(-8.0 * flat + 4.0 * n * (n - 1) - 7) / 2.0 - 0.5)).astype(np.int64)
    j = flat + i + 1 - n * (n - 1) // 2 + (n - i) * ((n - i) - 1) // 2
    return Graph(n, np.column_stack([i, j]))
