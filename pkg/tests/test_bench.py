import csv
import io
import json

import numpy as np
import pytest

from milinkpred import ExperimentConfig, Scorer, ScorerKind, erdos_renyi, run_complexity, run_experiment
from milinkpred.bench import (InfeasibleError, candidate_scores_pairwise,
                              estimate_complexity_seconds, resolve_threads)
from milinkpred.evaluation import rank_candidates


def test_config_validation():
    with pytest.raises(ValueError):
        ExperimentConfig(runs=0)
    with pytest.raises(ValueError):
        ExperimentConfig(probe_fraction=1.5)
    with pytest.raises(ValueError):
        ExperimentConfig(predictors=())
    with pytest.raises(ValueError):
        ExperimentConfig(predictors=("katz",))
    with pytest.raises(ValueError):
        ExperimentConfig(auc_mode="fast")
    cfg = ExperimentConfig(predictors=("CN", "mi"), auc_mode="sampled:10")
    assert cfg.predictors == (ScorerKind.CN, ScorerKind.MI)
    assert str(cfg.auc_mode) == "sampled:10"


def test_resolve_threads(monkeypatch):
    monkeypatch.delenv("LINKPRED_THREADS", raising=False)
    assert resolve_threads(None) == 1
    monkeypatch.setenv("LINKPRED_THREADS", "3")
    assert resolve_threads(None) == 3
    assert resolve_threads("2") == 2
    assert resolve_threads("auto") >= 1
    with pytest.raises(ValueError):
        resolve_threads(0)


def test_run_deterministic_across_threads():
    g = erdos_renyi(60, 0.1, 1)
    a = run_experiment(g, ExperimentConfig(runs=6, threads=1, seed=4, l=20))
    b = run_experiment(g, ExperimentConfig(runs=6, threads=8, seed=4, l=20))
    assert a.to_json(include_elapsed=False) == b.to_json(include_elapsed=False)


def test_run_uses_consecutive_seeds_and_paired_splits(gstar):
    res = run_experiment(gstar, ExperimentConfig(runs=3, seed=10, predictors=("cn", "mi")))
    for rep in res.reports.values():
        assert [r.seed for r in rep.runs] == [10, 11, 12]
        assert rep.l == 19


def test_csv_and_json_schema(gstar):
    res = run_experiment(gstar, ExperimentConfig(runs=4, predictors=("ra", "car")))
    rows = list(csv.reader(io.StringIO(res.to_csv())))
    assert rows[0] == ["predictor", "seed", "auc", "precision", "elapsed_ms"]
    assert len(rows) == 1 + 2 * (4 + 2)
    assert [r[1] for r in rows[1:7]] == ["0", "1", "2", "3", "mean", "std"]
    d = json.loads(res.to_json())
    assert set(d) == {"dataset", "graph", "config", "conventions", "reports"}
    assert d["graph"] == {"n": 8, "m": 10}
    rep = d["reports"]["ra"]
    assert len(rep["runs"]) == 4 and "elapsed_ms" in rep["runs"][0]
    assert abs(rep["auc_mean"] - np.mean([r["auc"] for r in rep["runs"]])) < 1e-12


def test_giant_component_option():
    from milinkpred import load_edge_list
    g = load_edge_list("a b\nb c\nc d\nd a\na c\nx y\n")
    assert run_experiment(g, ExperimentConfig(runs=1, predictors=("cn",))).n == 4
    full = run_experiment(g, ExperimentConfig(runs=1, predictors=("cn",), giant_component=False))
    assert full.n == 6


@pytest.mark.parametrize("kind", [k.value for k in ScorerKind])
def test_pairwise_candidate_scores_match_engine(kind):
    g = erdos_renyi(35, 0.15, 6)
    sc = Scorer(kind, g)
    ref = candidate_scores_pairwise(g, sc)
    n = g.node_count
    u, v = np.triu_indices(n, 1)
    keep = np.array([not g.has_edge(a, b) for a, b in zip(u.tolist(), v.tolist())])
    assert np.allclose(ref, sc.score_pairs(u[keep], v[keep]), rtol=0, atol=1e-12)
    assert len(rank_candidates(g, sc)) == ref.size


def test_complexity_smoke():
    res = run_complexity([100], [4], seed=1, repeats=1)
    assert len(res.rows) == 3
    assert all(r.seconds < 1.0 for r in res.rows)
    again = run_complexity([100], [4], seed=1, repeats=1)
    assert [r.realized_degree for r in res.rows] == [r.realized_degree for r in again.rows]


def test_complexity_exponents_and_dict():
    res = run_complexity([150], [4, 8], seed=0, repeats=1)
    exps = res.exponents()
    assert set(exps) == {(150, k) for k in (ScorerKind.MI, ScorerKind.CAR, ScorerKind.CRA)}
    d = res.to_dict()
    assert len(d["rows"]) == 6 and len(d["exponents"]) == 3
    assert "fitted exponent" in res.table()


def test_complexity_infeasible():
    assert estimate_complexity_seconds(10 ** 6, 16) > 600
    with pytest.raises(InfeasibleError):
        run_complexity([10 ** 6], [16])
    with pytest.raises(InfeasibleError):
        run_complexity([1], [4])
