"""Candidate ranking, AUC and precision against a probe set."""
from __future__ import annotations

import dataclasses
import math
from typing import Iterable, NamedTuple, Sequence

import numpy as np
from scipy import sparse

from .graph import Graph
from .predictors import Scorer, ScorerKind
from .split import SplitResult

__all__ = [
    "RankedCandidates",
    "RunRecord",
    "EvaluationReport",
    "AucMode",
    "rank_candidates",
    "auc_exact",
    "auc_sampled",
    "precision_at",
    "evaluate_split",
    "SplitMetrics",
    "DEFAULT_SAMPLES",
    "EXACT_LIMIT",
    "TIE_TOLERANCE",
    "snap_ties",
    "tie_groups",
]

# sampled AUC is used above this many probe x nonexistent comparisons
EXACT_LIMIT = 10 ** 8
# binomial standard error < 0.002 at any AUC
DEFAULT_SAMPLES = 672_400
_BLOCK_CELLS = 1 << 22
# scores closer than this (relative to max(1, |score|)) count as tied; sums
# such as 1/2 + 1/6 and 1/3 + 1/3 differ only by rounding in floating point
TIE_TOLERANCE = 1e-12
# the streaming top-L keeps this much extra below its threshold so that
# rounding-level ties straddling the cut are not lost
_TOP_MARGIN = 1e3 * TIE_TOLERANCE


@dataclasses.dataclass(frozen=True)
class RankedCandidates:
    """Pairs sorted by descending score, ties by ascending ``(min, max)`` id."""
    pairs: np.ndarray
    scores: np.ndarray

    def __len__(self):
        return self.scores.size

    def top(self, k: int) -> list[tuple[int, int, float]]:
        return [(int(u), int(v), float(s))
                for (u, v), s in zip(self.pairs[:k], self.scores[:k])]


def tie_groups(values: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Sorted distinct values and, for each, the smallest value of its tie group.

    Consecutive distinct values join one group when their gap is within
    :data:`TIE_TOLERANCE` relative to ``max(1, |value|)``.
    """
    uniq = np.unique(np.asarray(values, dtype=np.float64))
    if uniq.size == 0:
        return uniq, uniq
    gaps = np.diff(uniq)
    with np.errstate(invalid="ignore"):
        joined = gaps <= TIE_TOLERANCE * np.maximum(1.0, np.abs(uniq[1:]))
    start = np.concatenate([[True], ~joined])
    idx = np.maximum.accumulate(np.where(start, np.arange(uniq.size), 0))
    return uniq, uniq[idx]


def snap_ties(values, groups=None) -> np.ndarray:
    """Replace each score by its tie-group representative."""
    values = np.asarray(values, dtype=np.float64)
    uniq, reps = groups if groups is not None else tie_groups(values)
    if values.size == 0:
        return values.copy()
    return reps[np.searchsorted(uniq, values)]


def _order(scores: np.ndarray, u: np.ndarray, v: np.ndarray) -> np.ndarray:
    return np.lexsort((v, u, -scores))


def _canonical_pairs(pairs) -> np.ndarray:
    arr = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
    return np.sort(arr, axis=1)


def rank_candidates(g_train: Graph, scorer: Scorer,
                    restrict: Iterable[tuple[int, int]] | None = None) -> RankedCandidates:
    """Score and sort every non-edge of ``g_train`` (or just ``restrict``)."""
    if scorer.graph is not g_train and scorer.graph != g_train:
        raise ValueError("scorer was built on a different training graph")
    if restrict is not None:
        pairs = _canonical_pairs(list(restrict))
        if pairs.size:
            pairs = np.unique(pairs, axis=0)
        scores = scorer.score_pairs(pairs[:, 0], pairs[:, 1])
    else:
        n = g_train.node_count
        u, v = np.triu_indices(n, 1)
        if g_train.edge_count:
            keep = ~np.asarray(_pair_mask(g_train.edges, n)[u, v]).ravel()
            u, v = u[keep], v[keep]
        pairs = np.column_stack([u, v]).astype(np.int64)
        scores = scorer.score_pairs(u, v)
    order = _order(snap_ties(scores), pairs[:, 0], pairs[:, 1])
    return RankedCandidates(pairs=pairs[order], scores=scores[order])


def _pair_mask(pairs: np.ndarray, n: int) -> sparse.csr_matrix:
    data = np.ones(pairs.shape[0], dtype=bool)
    return sparse.csr_matrix((data, (pairs[:, 0], pairs[:, 1])), shape=(n, n))


def auc_exact(probe_scores: Sequence[float], nonexistent_scores: Sequence[float]) -> float:
    """Fraction of (probe, nonexistent) comparisons the probe link wins,
    ties counting one half, over *all* comparisons."""
    p = np.asarray(probe_scores, dtype=np.float64)
    q = np.sort(np.asarray(nonexistent_scores, dtype=np.float64))
    if p.size == 0 or q.size == 0:
        raise ValueError("AUC needs at least one probe and one nonexistent score")
    below = np.searchsorted(q, p, side="left")
    at_or_below = np.searchsorted(q, p, side="right")
    wins = int(below.sum())
    ties = int((at_or_below - below).sum())
    return (wins + 0.5 * ties) / (p.size * q.size)


def auc_sampled(probe_scores: Sequence[float], nonexistent_scores: Sequence[float],
                n: int, seed: int, chunk: int = 1 << 20) -> float:
    """Monte Carlo AUC from ``n`` seeded random comparisons.

    Draws come from one PCG64 stream in fixed-size chunks, so the estimate
    depends only on ``(scores, n, seed)``.
    """
    p = np.asarray(probe_scores, dtype=np.float64)
    q = np.asarray(nonexistent_scores, dtype=np.float64)
    if p.size == 0 or q.size == 0:
        raise ValueError("AUC needs at least one probe and one nonexistent score")
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = np.random.Generator(np.random.PCG64(seed))
    score = 0.0
    done = 0
    while done < n:
        c = min(chunk, n - done)
        a = p[rng.integers(0, p.size, size=c)]
        b = q[rng.integers(0, q.size, size=c)]
        score += float(np.count_nonzero(a > b)) + 0.5 * float(np.count_nonzero(a == b))
        done += c
    return score / n


def precision_at(ranked: RankedCandidates, l: int, probe) -> float:
    """Share of the top ``l`` candidates that are probe links."""
    if not 1 <= l <= len(ranked):
        raise ValueError(f"l must lie in [1, {len(ranked)}], got {l}")
    probe_set = {(int(a), int(b)) for a, b in _canonical_pairs(probe).tolist()}
    hits = sum((int(u), int(v)) in probe_set for u, v in ranked.pairs[:l])
    return hits / l


@dataclasses.dataclass(frozen=True)
class AucMode:
    """``exact``, ``sampled`` with ``n`` comparisons, or ``auto`` (exact up to
    :data:`EXACT_LIMIT` comparisons, else sampled with :data:`DEFAULT_SAMPLES`)."""
    kind: str = "auto"
    n: int = DEFAULT_SAMPLES

    @classmethod
    def parse(cls, text: str | "AucMode") -> "AucMode":
        if isinstance(text, AucMode):
            return text
        t = str(text).strip().lower()
        if t in ("exact", "auto"):
            return cls(t)
        if t.startswith("sampled"):
            _, _, num = t.partition(":")
            n = int(num) if num else DEFAULT_SAMPLES
            if n < 1:
                raise ValueError("sampled AUC needs n >= 1")
            return cls("sampled", n)
        raise ValueError(f"unknown AUC mode {text!r}; use exact, auto or sampled:N")

    def __str__(self):
        return f"sampled:{self.n}" if self.kind == "sampled" else self.kind

    def resolve(self, comparisons: int) -> "AucMode":
        if self.kind == "auto":
            return AucMode("exact") if comparisons <= EXACT_LIMIT else AucMode("sampled", self.n)
        return self


def _top_candidates(scores, us, vs, flags, l):
    """The ``l`` best candidates, near-ties merged and broken by ``(u, v)``."""
    if scores.size > l:
        thresh = np.partition(scores, scores.size - l)[scores.size - l]
        if np.isfinite(thresh):
            thresh -= _TOP_MARGIN * max(1.0, abs(thresh))
        keep = scores >= thresh
        scores, us, vs, flags = scores[keep], us[keep], vs[keep], flags[keep]
    order = _order(snap_ties(scores), us, vs)[:l]
    return scores[order], us[order], vs[order], flags[order]


class SplitMetrics(NamedTuple):
    auc: float
    precision: float
    auc_mode: str  # as resolved, e.g. "exact" or "sampled:672400"
    l: int  # effective L, capped at the number of candidates


def evaluate_split(sp: SplitResult, kind, l: int = 100, auc_mode="auto",
                   scorer: Scorer | None = None) -> SplitMetrics:
    """AUC and precision@l of one predictor on one split.

    Every pair outside the training edges is a candidate. When a graph has
    fewer than ``l`` candidates, precision is taken over all of them.
    Sampled AUC draws its comparisons from the split seed.
    """
    g = sp.train
    n = g.node_count
    scorer = scorer or Scorer(kind, g)
    mode = AucMode.parse(auc_mode)
    train_mask = _pair_mask(g.edges, n) if g.edge_count else sparse.csr_matrix((n, n), dtype=bool)
    probe_mask = _pair_mask(sp.probe, n)
    block = max(1, _BLOCK_CELLS // max(n, 1))
    cols = np.arange(n)

    probe_parts, neg_parts = [], []
    top = (np.zeros(0), np.zeros(0, np.int64), np.zeros(0, np.int64), np.zeros(0, bool))
    for lo in range(0, n, block):
        hi = min(lo + block, n)
        s = scorer.score_rows(lo, hi)
        rows = np.arange(lo, hi)[:, None]
        cand = (cols[None, :] > rows) & ~train_mask[lo:hi].toarray()
        is_probe = probe_mask[lo:hi].toarray()
        r, c = np.nonzero(cand)
        vals = s[r, c]
        pflag = is_probe[r, c]
        probe_parts.append(vals[pflag])
        neg_parts.append(vals[~pflag])
        merged = tuple(np.concatenate([a, b]) for a, b in
                       zip(top, (vals, r + lo, c, pflag)))
        top = _top_candidates(*merged, l)

    groups = tie_groups(np.concatenate(probe_parts + neg_parts))
    probe_scores = snap_ties(np.concatenate(probe_parts), groups)
    neg_scores = snap_ties(np.concatenate(neg_parts), groups)
    if probe_scores.size != sp.probe.shape[0]:
        raise AssertionError("probe pairs missing from the candidate set")
    l_eff = min(l, probe_scores.size + neg_scores.size)
    resolved = mode.resolve(probe_scores.size * neg_scores.size)
    if resolved.kind == "exact":
        auc = auc_exact(probe_scores, neg_scores)
    else:
        auc = auc_sampled(probe_scores, neg_scores, resolved.n, seed=sp.seed)
    t_scores, t_u, t_v, t_flags = top
    order = _order(snap_ties(t_scores, groups), t_u, t_v)[:l_eff]
    precision = float(np.count_nonzero(t_flags[order])) / l_eff
    return SplitMetrics(auc, precision, str(resolved), l_eff)


@dataclasses.dataclass(frozen=True)
class RunRecord:
    seed: int
    auc: float
    precision: float
    elapsed: float  # seconds


def _mean_std(values: list[float]) -> tuple[float, float]:
    if not values:
        return math.nan, math.nan
    arr = np.asarray(values, dtype=np.float64)
    std = float(arr.std(ddof=1)) if arr.size > 1 else 0.0
    return float(arr.mean()), std


@dataclasses.dataclass
class EvaluationReport:
    """Per-run metrics of one predictor; aggregates use the sample std."""
    predictor: ScorerKind
    l: int
    auc_mode: str
    runs: list[RunRecord] = dataclasses.field(default_factory=list)

    @property
    def auc_mean(self) -> float:
        return _mean_std([r.auc for r in self.runs])[0]

    @property
    def auc_std(self) -> float:
        return _mean_std([r.auc for r in self.runs])[1]

    @property
    def precision_mean(self) -> float:
        return _mean_std([r.precision for r in self.runs])[0]

    @property
    def precision_std(self) -> float:
        return _mean_std([r.precision for r in self.runs])[1]

    @property
    def elapsed_mean(self) -> float:
        return _mean_std([r.elapsed for r in self.runs])[0]

    def to_dict(self, include_elapsed: bool = True) -> dict:
        runs = []
        for r in self.runs:
            row = {"seed": r.seed, "auc": r.auc, "precision": r.precision}
            if include_elapsed:
                row["elapsed_ms"] = r.elapsed * 1e3
            runs.append(row)
        out = {
            "predictor": self.predictor.value,
            "l": self.l,
            "auc_mode": self.auc_mode,
            "runs": runs,
            "auc_mean": self.auc_mean,
            "auc_std": self.auc_std,
            "precision_mean": self.precision_mean,
            "precision_std": self.precision_std,
        }
        if include_elapsed:
            out["elapsed_ms_mean"] = self.elapsed_mean * 1e3
        return out
