"""Repeated-split experiments, report writers and the scaling benchmark."""
from __future__ import annotations

import csv
import dataclasses
import io
import json
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from typing import Sequence

import numpy as np

from .evaluation import AucMode, EvaluationReport, RunRecord, evaluate_split
from .graph import Graph, erdos_renyi, giant_component
from .predictors import Scorer, ScorerKind
from .split import split

__all__ = [
    "ExperimentConfig",
    "ExperimentResult",
    "resolve_threads",
    "run_experiment",
    "ComplexityRow",
    "ComplexityResult",
    "InfeasibleError",
    "candidate_scores_pairwise",
    "estimate_complexity_seconds",
    "run_complexity",
]

ALL_PREDICTORS = tuple(ScorerKind)

CONVENTIONS = {
    "split": "uniform random edge split; training-graph connectivity is not enforced",
    "paired_splits": "every predictor is evaluated on the same split of each run",
    "run_seed": "run i splits with seed + i",
    "candidates": "all node pairs that are not training edges",
    "precision_tie_break": "equal scores ordered by ascending (min id, max id)",
    "auc_ties": "ties count one half",
}


def resolve_threads(threads: int | str | None) -> int:
    """``None`` falls back to ``$LINKPRED_THREADS`` then 1; ``"auto"`` uses all CPUs."""
    if threads is None:
        threads = os.environ.get("LINKPRED_THREADS", "1")
    if isinstance(threads, str):
        if threads.strip().lower() == "auto":
            return os.cpu_count() or 1
        threads = int(threads)
    if threads < 1:
        raise ValueError("threads must be >= 1")
    return threads


@dataclasses.dataclass(frozen=True)
class ExperimentConfig:
    probe_fraction: float = 0.1
    runs: int = 100
    predictors: tuple[ScorerKind, ...] = ALL_PREDICTORS
    seed: int = 0
    l: int = 100
    auc_mode: AucMode = AucMode()
    threads: int = 1
    giant_component: bool = True

    def __post_init__(self):
        if self.runs < 1:
            raise ValueError("runs must be >= 1")
        if not 0.0 < self.probe_fraction < 1.0:
            raise ValueError("probe_fraction must lie in (0, 1)")
        if not self.predictors:
            raise ValueError("at least one predictor is required")
        if self.l < 1:
            raise ValueError("l must be >= 1")
        object.__setattr__(self, "predictors",
                           tuple(ScorerKind.parse(p) for p in self.predictors))
        object.__setattr__(self, "auc_mode", AucMode.parse(self.auc_mode))

    def to_dict(self) -> dict:
        return {
            "probe_fraction": self.probe_fraction,
            "runs": self.runs,
            "predictors": [p.value for p in self.predictors],
            "seed": self.seed,
            "l": self.l,
            "auc_mode": str(self.auc_mode),
            "giant_component": self.giant_component,
        }


@dataclasses.dataclass
class ExperimentResult:
    config: ExperimentConfig
    n: int
    m: int
    reports: dict[ScorerKind, EvaluationReport]
    dataset: str | None = None

    def to_dict(self, include_elapsed: bool = True) -> dict:
        return {
            "dataset": self.dataset,
            "graph": {"n": self.n, "m": self.m},
            "config": self.config.to_dict(),
            "conventions": CONVENTIONS,
            "reports": {k.value: r.to_dict(include_elapsed)
                        for k, r in self.reports.items()},
        }

    def to_json(self, include_elapsed: bool = True) -> str:
        return json.dumps(self.to_dict(include_elapsed), sort_keys=True, indent=2)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["predictor", "seed", "auc", "precision", "elapsed_ms"])
        for kind, rep in self.reports.items():
            for r in rep.runs:
                w.writerow([kind.value, r.seed, repr(r.auc), repr(r.precision),
                            f"{r.elapsed * 1e3:.3f}"])
            w.writerow([kind.value, "mean", repr(rep.auc_mean), repr(rep.precision_mean),
                        f"{rep.elapsed_mean * 1e3:.3f}"])
            w.writerow([kind.value, "std", repr(rep.auc_std), repr(rep.precision_std), ""])
        return buf.getvalue()


def _one_run(g: Graph, cfg: ExperimentConfig, i: int):
    sp = split(g, cfg.probe_fraction, cfg.seed + i)
    out = []
    for kind in cfg.predictors:
        t0 = time.perf_counter()
        res = evaluate_split(sp, kind, l=cfg.l, auc_mode=cfg.auc_mode)
        rec = RunRecord(sp.seed, res.auc, res.precision, time.perf_counter() - t0)
        out.append((kind, rec, res.auc_mode, res.l))
    return out


def run_experiment(g: Graph, cfg: ExperimentConfig, dataset: str | None = None) -> ExperimentResult:
    """Evaluate every predictor over ``cfg.runs`` paired random splits.

    Runs are independent, so they may execute on ``cfg.threads`` workers;
    the metrics depend only on the graph and the configuration.
    """
    if cfg.giant_component:
        g = giant_component(g)
    if cfg.threads > 1 and cfg.runs > 1:
        with ThreadPoolExecutor(cfg.threads) as pool:
            results = list(pool.map(lambda i: _one_run(g, cfg, i), range(cfg.runs)))
    else:
        results = [_one_run(g, cfg, i) for i in range(cfg.runs)]
    reports = {}
    for run in results:
        for kind, rec, mode, l_eff in run:
            rep = reports.get(kind)
            if rep is None:
                rep = reports[kind] = EvaluationReport(kind, l_eff, mode)
            elif rep.auc_mode != mode:
                rep.auc_mode = "mixed"
            rep.runs.append(rec)
    return ExperimentResult(cfg, g.node_count, g.edge_count, reports, dataset)


# ---------------------------------------------------------------------------
# scaling benchmark

class InfeasibleError(RuntimeError):
    pass


def candidate_scores_pairwise(g: Graph, scorer: Scorer) -> np.ndarray:
    """Scores of all non-edge pairs in row-major order, pair by pair.

    Common-neighbour lists come from one sweep over each node's neighbour
    pairs; pairs without common neighbours take the scorer's empty-set value
    in one vectorized step, and the rest go through the per-pair formulas.
    """
    n = g.node_count
    u, v = np.triu_indices(n, 1)
    scores = scorer.empty_score(u, v).astype(np.float64)
    common: dict[int, list[int]] = {}
    for z in range(n):
        nb = g.neighbors(z).tolist()
        for i, a in enumerate(nb):
            base = a * n
            for b in nb[i + 1:]:
                key = base + b
                lst = common.get(key)
                if lst is None:
                    common[key] = [z]
                else:
                    lst.append(z)
    # flat index of (a, b), a < b, in the row-major upper triangle
    for key, zs in common.items():
        a, b = divmod(key, n)
        scores[a * n - a * (a + 1) // 2 + b - a - 1] = scorer.score_given_common(a, b, zs)
    if g.edge_count:
        e = g.edges
        a, b = e[:, 0], e[:, 1]
        edge_flat = a * n - a * (a + 1) // 2 + b - a - 1
        keep = np.ones(scores.size, dtype=bool)
        keep[edge_flat] = False
        scores = scores[keep]
    return scores


def estimate_complexity_seconds(n: int, k: float, predictors: int = 3) -> float:
    """Rough wall-time of one :func:`candidate_scores_pairwise` sweep set."""
    pairs = n * (n - 1) / 2
    two_hop = n * k * k / 2
    return predictors * (pairs * 5e-8 + two_hop * (3e-6 + k * 2e-7))


@dataclasses.dataclass(frozen=True)
class ComplexityRow:
    n: int
    avg_degree: float
    realized_degree: float
    predictor: ScorerKind
    seconds: float


@dataclasses.dataclass
class ComplexityResult:
    rows: list[ComplexityRow]
    seed: int

    def exponents(self) -> dict[tuple[int, ScorerKind], float]:
        """Least-squares slope of log(time) against log(<k>) per (N, predictor)."""
        out = {}
        keys = sorted({(r.n, r.predictor) for r in self.rows},
                      key=lambda t: (t[0], list(ScorerKind).index(t[1])))
        for n, kind in keys:
            sel = [r for r in self.rows if r.n == n and r.predictor is kind]
            if len({r.avg_degree for r in sel}) < 2:
                continue
            x = np.log([r.realized_degree for r in sel])
            y = np.log([r.seconds for r in sel])
            out[(n, kind)] = float(np.polyfit(x, y, 1)[0])
        return out

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "rows": [{"n": r.n, "avg_degree": r.avg_degree,
                      "realized_degree": r.realized_degree,
                      "predictor": r.predictor.value, "seconds": r.seconds}
                     for r in self.rows],
            "exponents": [{"n": n, "predictor": k.value, "exponent": e}
                          for (n, k), e in self.exponents().items()],
        }

    def table(self) -> str:
        lines = [f"{'N':>7} {'<k>':>6} {'pred':>5} {'seconds':>10}"]
        for r in self.rows:
            lines.append(f"{r.n:>7} {r.avg_degree:>6g} {r.predictor.value:>5} {r.seconds:>10.4f}")
        lines.append("")
        lines.append("fitted exponent of time in <k>:")
        for (n, k), e in self.exponents().items():
            lines.append(f"  N={n:<7} {k.value:>5}  {e:.3f}")
        return "\n".join(lines)


def run_complexity(sizes: Sequence[int], avg_degrees: Sequence[float], seed: int = 0,
                   predictors: Sequence = (ScorerKind.MI, ScorerKind.CAR, ScorerKind.CRA),
                   repeats: int = 3, max_seconds: float = 600.0) -> ComplexityResult:
    """Time full candidate scoring on Erdős–Rényi graphs G(N, <k>/(N-1)).

    Each timing is the best of ``repeats`` and includes the predictor's
    per-graph precomputation. Graph ``j`` of size ``N`` uses seed
    ``seed + j`` so reruns see identical graphs.
    """
    kinds = [ScorerKind.parse(p) for p in predictors]
    budget = sum(estimate_complexity_seconds(n, k, len(kinds)) * repeats
                 for n in sizes for k in avg_degrees)
    if budget > max_seconds:
        raise InfeasibleError(f"estimated {budget:.0f} s exceeds the {max_seconds:.0f} s limit")
    for n in sizes:
        if n < 2 or n * (n - 1) // 2 > 2 * 10 ** 8:
            raise InfeasibleError(f"N={n} is outside the supported range")
    rows = []
    for n in sizes:
        for j, k in enumerate(avg_degrees):
            g = erdos_renyi(n, min(1.0, k / (n - 1)), seed + j)
            realized = float(g.degrees.mean())
            for kind in kinds:
                best = math.inf
                for _ in range(repeats):
                    t0 = time.perf_counter()
                    candidate_scores_pairwise(g, Scorer(kind, g))
                    best = min(best, time.perf_counter() - t0)
                rows.append(ComplexityRow(n, float(k), realized, kind, best))
    return ComplexityResult(rows, seed)
