"""Common-neighbour link predictors and the mutual-information (MI) index.

Every score is defined on a *training* graph. The module offers two ways to
evaluate a predictor:

* per pair, through ``score_cn(g, x, y)`` and friends, which follow the
  definitions literally (the reference path), and
* in bulk, through :class:`Scorer`, which assembles the common-neighbour
  sums as sparse products ``A diag(w) A`` and adds the pair baseline for MI.

Both paths accumulate per-pair sums in ascending node-id order, so for CN,
RA, LNB-*, CAR and MI they agree bit for bit. All logarithms are base 2.
"""
from __future__ import annotations

import dataclasses
import enum
import math

import numpy as np
from scipy import sparse

from .graph import Graph, local_clustering

__all__ = [
    "ScorerKind",
    "LnbPrecompute",
    "MiPrecompute",
    "Scorer",
    "p_connect",
    "pair_self_information",
    "node_link_mutual_information",
    "conditional_self_information",
    "lnb_precompute",
    "mi_precompute",
    "score_cn",
    "score_ra",
    "score_lnb_cn",
    "score_lnb_ra",
    "score_car",
    "score_cra",
    "score_mi",
    "MIN_SCORE",
]

# Score given to pairs whose link probability is zero under the MI model
# (an endpoint has training degree 0); ranks them last.
MIN_SCORE = -math.inf


class ScorerKind(str, enum.Enum):
    CN = "cn"
    RA = "ra"
    LNB_CN = "lnb-cn"
    LNB_RA = "lnb-ra"
    CAR = "car"
    CRA = "cra"
    MI = "mi"

    @classmethod
    def parse(cls, name) -> "ScorerKind":
        if isinstance(name, cls):
            return name
        key = str(name).strip().lower().replace("_", "-")
        try:
            return cls(key)
        except ValueError:
            known = ", ".join(k.value for k in cls)
            raise ValueError(f"unknown predictor {name!r}; expected one of {known}") from None

    def __str__(self):
        return self.value


# ---------------------------------------------------------------------------
# link probability from degrees

def p_connect(k_m: int, k_n: int, m_edges: int) -> float:
    """Probability that two nodes of degrees ``k_m`` and ``k_n`` are linked
    when ``m_edges`` links are placed without degree correlations::

        1 - C(M - k_m, k_n) / C(M, k_n)
          = 1 - prod_{i<k_n} (1 - k_m / (M - i))

    Evaluated as a sum of ``log1p`` terms over the smaller degree, which
    makes the result exactly symmetric. Returns 1 when ``k_m + k_n > M``
    and 0 when either degree is 0.
    """
    if k_m < 0 or k_n < 0:
        raise ValueError("degrees must be non-negative")
    if m_edges < 1:
        raise ValueError("the training graph must have at least one edge")
    if k_m == 0 or k_n == 0:
        return 0.0
    if k_m + k_n > m_edges:
        return 1.0
    a, b = max(k_m, k_n), min(k_m, k_n)
    log_p0 = 0.0
    for i in range(b):
        log_p0 += math.log1p(-a / (m_edges - i))
    return -math.expm1(log_p0)


def _self_information_table(values: np.ndarray, m_edges: int) -> np.ndarray:
    """``-log2 p_connect(values[i], values[j], M)`` for sorted distinct degrees."""
    d = values.size
    table = np.zeros((d, d))
    if d == 0:
        return table
    with np.errstate(divide="ignore"):
        for i in range(d - 1, -1, -1):
            a = int(values[i])
            if a == 0:
                table[i, :] = math.inf
                table[:, i] = math.inf
                continue
            # partner degrees b <= a on the columns j <= i
            b = values[: i + 1]
            nvalid = max(0, min(int(b.max()), m_edges - a))
            steps = np.log1p(-a / (m_edges - np.arange(nvalid, dtype=np.float64)))
            cs = np.concatenate([[0.0], np.cumsum(steps)])
            info = np.zeros(b.size)
            ok = (b >= 1) & (b <= m_edges - a)
            p1 = -np.expm1(cs[b[ok]])
            info[ok] = -np.log2(p1)
            info[b == 0] = math.inf
            table[i, : i + 1] = info
            table[: i + 1, i] = info
    return table


def pair_self_information(g: Graph, m: int, n: int) -> float:
    """``-log2 p_connect(k_m, k_n, M)`` in bits on training graph ``g``;
    ``inf`` when the probability is 0."""
    if m == n:
        raise ValueError("pair_self_information needs two distinct nodes")
    deg = g.degrees
    p = p_connect(int(deg[g._check(m)]), int(deg[g._check(n)]), g.edge_count)
    return math.inf if p == 0.0 else -math.log2(p)


def _neighbor_pair_counts(g: Graph) -> tuple[np.ndarray, np.ndarray]:
    """Connected and disconnected neighbour pairs of each node."""
    k = g.degrees.astype(np.float64)
    pairs = k * (k - 1) / 2.0
    connected = np.rint(local_clustering(g) * pairs)
    return connected, pairs - connected


def conditional_self_information(g: Graph, z: int) -> float:
    """Bits of surprise that two neighbours of ``z`` are linked, i.e. minus
    log2 of z's local clustering; ``inf`` if no neighbour pair is linked."""
    c = local_clustering(g)[g._check(z)]
    return math.inf if c == 0 else -math.log2(c)


def node_link_mutual_information(g: Graph, z: int) -> float:
    """Mutual information (bits) between "z is a common neighbour of a pair"
    and "the pair is linked".

    It is the mean self-information of z's neighbour pairs minus the
    self-information of z's local clustering coefficient. Zero when z has
    fewer than two neighbours or no linked neighbour pair.
    """
    nb = g.neighbors(z)
    k = nb.size
    if k < 2:
        return 0.0
    nset = g.neighbor_set
    linked = 0
    total = 0.0
    for i in range(k):
        mi = int(nb[i])
        for j in range(i + 1, k):
            nj = int(nb[j])
            total += pair_self_information(g, mi, nj)
            if nj in nset(mi):
                linked += 1
    if linked == 0:
        return 0.0
    npairs = k * (k - 1) // 2
    return total / npairs + math.log2(linked / npairs)


@dataclasses.dataclass(frozen=True)
class MiPrecompute:
    """Per-training-graph state for the MI score.

    ``self_info[degree_index[m], degree_index[n]]`` is the self-information
    of a link between ``m`` and ``n``; ``degree_values`` holds the sorted
    distinct training degrees.
    """
    node_mi: np.ndarray
    self_info: np.ndarray
    degree_values: np.ndarray
    degree_index: np.ndarray
    train_m: int

    def pair_information(self, x, y):
        di = self.degree_index
        return self.self_info[di[x], di[y]]


def mi_precompute(g: Graph) -> MiPrecompute:
    if g.edge_count < 1:
        raise ValueError("MI needs a training graph with at least one edge")
    deg = g.degrees
    values, index = np.unique(deg, return_inverse=True)
    table = _self_information_table(values, g.edge_count)
    connected, _ = _neighbor_pair_counts(g)
    node_mi = np.zeros(g.node_count)
    for z in range(g.node_count):
        k = int(deg[z])
        if k < 2 or connected[z] == 0:
            continue
        idx = index[g.neighbors(z)]
        sub = table[np.ix_(idx, idx)]
        npairs = k * (k - 1) // 2
        mean_info = np.triu(sub, 1).sum() / npairs
        node_mi[z] = mean_info + math.log2(connected[z] / npairs)
    for arr in (node_mi, table, values, index):
        arr.flags.writeable = False
    return MiPrecompute(node_mi=node_mi, self_info=table, degree_values=values,
                        degree_index=index, train_m=g.edge_count)


@dataclasses.dataclass(frozen=True)
class LnbPrecompute:
    eta: float
    r_z: np.ndarray
    weight: np.ndarray  # log2(eta) + log2(R_z), the per-neighbour LNB-CN term


def lnb_precompute(g: Graph) -> LnbPrecompute:
    """Prior odds ``eta = N(N-1)/(2M) - 1`` and smoothed per-node ratios
    ``R_z = (linked pairs + 1) / (unlinked pairs + 1)`` of z's neighbours."""
    n, m = g.node_count, g.edge_count
    if m < 1 or n < 2:
        raise ValueError("LNB needs at least two nodes and one edge")
    eta = n * (n - 1) / (2.0 * m) - 1.0
    if eta <= 0:
        raise ValueError("LNB is undefined on a complete graph (eta = 0)")
    connected, disconnected = _neighbor_pair_counts(g)
    r = (connected + 1.0) / (disconnected + 1.0)
    w = math.log2(eta) + np.log2(r)
    r.flags.writeable = False
    w.flags.writeable = False
    return LnbPrecompute(eta=eta, r_z=r, weight=w)


# ---------------------------------------------------------------------------
# per-pair scores

def _common(g: Graph, x: int, y: int) -> list[int]:
    if x == y:
        raise ValueError("a candidate pair needs two distinct nodes")
    return sorted(g.neighbor_set(x) & g.neighbor_set(y))


def _sorted_intersection_size(a, b) -> int:
    i = j = c = 0
    na, nb = len(a), len(b)
    while i < na and j < nb:
        if a[i] < b[j]:
            i += 1
        elif a[i] > b[j]:
            j += 1
        else:
            c += 1
            i += 1
            j += 1
    return c


def _local_community_sizes(g: Graph, common: list[int]) -> list[int]:
    # |gamma(z)| = |Gamma(z) ∩ O| by merging sorted neighbour lists
    return [_sorted_intersection_size(g._nbrs[z].tolist(), common) for z in common]


def score_cn(g: Graph, x: int, y: int) -> float:
    return float(len(_common(g, x, y)))


def score_ra(g: Graph, x: int, y: int) -> float:
    deg = g.degrees
    s = 0.0
    for z in _common(g, x, y):
        s += 1.0 / deg[z]
    return s


def score_lnb_cn(g: Graph, pre: LnbPrecompute, x: int, y: int) -> float:
    """``|O| log2(eta) + sum log2(R_z)``, accumulated per common neighbour."""
    s = 0.0
    for z in _common(g, x, y):
        s += pre.weight[z]
    return s


def score_lnb_ra(g: Graph, pre: LnbPrecompute, x: int, y: int) -> float:
    deg = g.degrees
    s = 0.0
    for z in _common(g, x, y):
        s += pre.weight[z] / deg[z]
    return s


def _car_from_common(g: Graph, common: list[int]) -> float:
    if not common:
        return 0.0
    return len(common) * (sum(_local_community_sizes(g, common)) / 2.0)


def _cra_from_common(g: Graph, common: list[int]) -> float:
    deg = g.degrees
    s = 0.0
    for z, size in zip(common, _local_community_sizes(g, common)):
        s += size / deg[z]
    return s


def score_car(g: Graph, x: int, y: int) -> float:
    return _car_from_common(g, _common(g, x, y))


def score_cra(g: Graph, x: int, y: int) -> float:
    return _cra_from_common(g, _common(g, x, y))


def _mi_from_common(pre: MiPrecompute, x: int, y: int, common) -> float:
    info = pre.pair_information(x, y)
    if info == math.inf:
        return MIN_SCORE
    s = 0.0
    for z in common:
        s += pre.node_mi[z]
    return s - info


def score_mi(g: Graph, pre: MiPrecompute, x: int, y: int) -> float:
    """Summed mutual information of the common neighbours minus the pair's
    own self-information. Nonzero even without common neighbours."""
    return _mi_from_common(pre, x, y, _common(g, x, y))


# ---------------------------------------------------------------------------
# bulk scoring

class Scorer:
    """A predictor bound to one training graph, with its precomputed state.

    >>> from milinkpred import canonical_fixture
    >>> s = Scorer("cn", canonical_fixture())
    >>> s.score(4, 7)
    2.0
    """

    def __init__(self, kind, graph: Graph):
        self.kind = ScorerKind.parse(kind)
        self.graph = graph
        self.lnb = None
        self.mi = None
        if self.kind in (ScorerKind.LNB_CN, ScorerKind.LNB_RA):
            self.lnb = lnb_precompute(graph)
        elif self.kind is ScorerKind.MI:
            self.mi = mi_precompute(graph)
        self._matrix = None

    def __repr__(self):
        return f"Scorer({self.kind.value!r}, {self.graph!r})"

    def score(self, x: int, y: int) -> float:
        g, k = self.graph, self.kind
        if k is ScorerKind.CN:
            return score_cn(g, x, y)
        if k is ScorerKind.RA:
            return score_ra(g, x, y)
        if k is ScorerKind.LNB_CN:
            return score_lnb_cn(g, self.lnb, x, y)
        if k is ScorerKind.LNB_RA:
            return score_lnb_ra(g, self.lnb, x, y)
        if k is ScorerKind.CAR:
            return score_car(g, x, y)
        if k is ScorerKind.CRA:
            return score_cra(g, x, y)
        return score_mi(g, self.mi, x, y)

    def score_given_common(self, x: int, y: int, common: list[int]) -> float:
        """Score a pair whose sorted common-neighbour list is already known."""
        k = self.kind
        if k is ScorerKind.MI:
            return _mi_from_common(self.mi, x, y, common)
        if k is ScorerKind.CAR:
            return _car_from_common(self.graph, common)
        if k is ScorerKind.CRA:
            return _cra_from_common(self.graph, common)
        if k is ScorerKind.CN:
            return float(len(common))
        deg = self.graph.degrees
        s = 0.0
        for z in common:
            if k is ScorerKind.RA:
                s += 1.0 / deg[z]
            elif k is ScorerKind.LNB_CN:
                s += self.lnb.weight[z]
            else:
                s += self.lnb.weight[z] / deg[z]
        return s

    def empty_score(self, x, y):
        """Score of pairs without common neighbours (vectorized over arrays)."""
        if self.kind is ScorerKind.MI:
            return -self.mi.pair_information(x, y)
        return np.zeros(np.broadcast(np.asarray(x), np.asarray(y)).shape)

    def common_neighbor_matrix(self) -> sparse.csr_matrix:
        """Symmetric sparse matrix of the common-neighbour part of the score.

        For MI the pair baseline ``-I(L_xy)`` is *not* included; see
        :meth:`empty_score`.
        """
        if self._matrix is None:
            self._matrix = self._build_matrix()
        return self._matrix

    def _build_matrix(self) -> sparse.csr_matrix:
        g, k = self.graph, self.kind
        a = g.adjacency_matrix()
        deg = g.degrees.astype(np.float64)
        if k in (ScorerKind.CAR, ScorerKind.CRA):
            return self._community_matrix(a, deg)
        if k is ScorerKind.CN:
            w = np.ones(g.node_count)
        elif k is ScorerKind.RA:
            w = np.divide(1.0, deg, out=np.zeros_like(deg), where=deg > 0)
        elif k in (ScorerKind.LNB_CN, ScorerKind.LNB_RA):
            w = np.array(self.lnb.weight)
            if k is ScorerKind.LNB_RA:
                w = np.divide(w, deg, out=np.zeros_like(deg), where=deg > 0)
        else:
            w = np.array(self.mi.node_mi)
        # the product's column order follows scipy's accumulator, so sort it
        # to keep each row's z terms in ascending order for the second product
        aw = sparse.csr_matrix(a @ sparse.diags(w, format="csr"))
        aw.sort_indices()
        m = aw @ a
        m = sparse.csr_matrix(m)
        m.sort_indices()
        return m

    def _community_matrix(self, a, deg) -> sparse.csr_matrix:
        # Each edge (z, w) lies inside O_xy exactly when x and y are both
        # common neighbours of z and w. Row e of `inside` marks Γ(z) ∩ Γ(w).
        e = self.graph.edges
        n = self.graph.node_count
        if e.shape[0] == 0:
            return sparse.csr_matrix((n, n))
        inside = sparse.csr_matrix(a[e[:, 0]].multiply(a[e[:, 1]]))
        inside.eliminate_zeros()
        if self.kind is ScorerKind.CAR:
            edges_in_o = (inside.T @ inside).tocsr()
            cn = a @ a
            m = sparse.csr_matrix(edges_in_o.multiply(cn))
        else:
            w = 1.0 / deg[e[:, 0]] + 1.0 / deg[e[:, 1]]
            m = (inside.T @ sparse.diags(w, format="csr") @ inside).tocsr()
        m.setdiag(0.0)
        m.eliminate_zeros()
        m.sort_indices()
        return m

    def score_pairs(self, u, v) -> np.ndarray:
        """Vectorized scores for id arrays ``u`` and ``v`` (``u != v``)."""
        u = np.asarray(u, dtype=np.int64)
        v = np.asarray(v, dtype=np.int64)
        if u.size == 0:
            return np.zeros(0)
        if np.any(u == v):
            raise ValueError("a candidate pair needs two distinct nodes")
        cn_part = np.asarray(self.common_neighbor_matrix()[u, v]).ravel()
        return cn_part + self.empty_score(u, v)

    def score_rows(self, lo: int, hi: int) -> np.ndarray:
        """Dense ``(hi - lo, N)`` block of scores for rows ``lo..hi-1``.

        Diagonal entries are meaningless and must be masked by the caller.
        """
        block = self.common_neighbor_matrix()[lo:hi].toarray()
        if self.kind is ScorerKind.MI:
            di = self.mi.degree_index
            block += -self.mi.self_info[di[lo:hi, None], di[None, :]]
        return block
