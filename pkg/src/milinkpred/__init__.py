"""Link prediction with common-neighbour indices and mutual information."""
from .graph import (EdgeListParseError, Graph, NetworkStats, StatsError, all_pairs_distances,
                    common_neighbors, erdos_renyi, giant_component, load_edge_list,
                    network_stats, read_edge_list)
from .split import SplitError, SplitResult, canonical_fixture, split
from .predictors import (LnbPrecompute, MiPrecompute, Scorer, ScorerKind,
                         conditional_self_information, lnb_precompute, mi_precompute, node_link_mutual_information, p_connect,
                         pair_self_information, score_car, score_cn, score_cra,
                         score_lnb_cn, score_lnb_ra, score_mi, score_ra)
from .evaluation import (AucMode, EvaluationReport, RankedCandidates, RunRecord,
                         SplitMetrics, auc_exact,
                         auc_sampled, evaluate_split, precision_at, rank_candidates)
from .bench import (ComplexityResult, ExperimentConfig, ExperimentResult, InfeasibleError,
                    run_complexity, run_experiment)

__version__ = "0.1.0"
