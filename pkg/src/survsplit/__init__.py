"""survsplit: survival split-point engine with an end-cut-preference harness.

Greedy logrank cutpoint search (GS), the smooth sigmoid surrogate (SSS)
alternative, a censored-data generator for the threshold hazard model, and
a Monte Carlo harness measuring how often each method picks boundary cuts.
"""

__version__ = "0.1.0"

from .datagen import HazardModel, SeedSpec, generate_dataset
from .errors import (
    DegenerateCovariate,
    EmptyGroup,
    InvalidN,
    NoAdmissibleCut,
    NoEvents,
    NonFinite,
    SplitEngineError,
    ZeroScale,
)
from .logrank_hard import HardSplitStat, Method, SplitResult, greedy_search, hard_stat
from .mc_harness import (
    EcpSummary,
    ExperimentConfig,
    ReplicateRecord,
    VarianceRow,
    preset_config,
    run_experiment,
    summarize,
    variance_probe,
)
from .risk_model import (
    RiskTable,
    Subject,
    build_risk_table,
    candidate_cutpoints,
    left_counts,
    rank_rescale,
    subjects_from_csv,
)
from .sss_smooth import (
    SigmoidMoments,
    SigmoidParams,
    SoftSplitStat,
    b_a_closed,
    delta_ka,
    psi_a_closed,
    sigmoid_moments,
    sigmoid_weight,
    soft_counts,
    soft_stat,
    sss_search,
)

__all__ = [
    "__version__",
    "Subject", "RiskTable", "build_risk_table", "left_counts",
    "candidate_cutpoints", "rank_rescale", "subjects_from_csv",
    "HardSplitStat", "SplitResult", "Method", "hard_stat", "greedy_search",
    "SigmoidParams", "SoftSplitStat", "SigmoidMoments", "sigmoid_weight",
    "soft_counts", "soft_stat", "sss_search", "b_a_closed", "psi_a_closed",
    "sigmoid_moments", "delta_ka",
    "HazardModel", "SeedSpec", "generate_dataset",
    "ExperimentConfig", "ReplicateRecord", "EcpSummary", "VarianceRow",
    "preset_config", "run_experiment", "summarize", "variance_probe",
    "SplitEngineError", "NoEvents", "NonFinite", "DegenerateCovariate",
    "ZeroScale", "NoAdmissibleCut", "InvalidN", "EmptyGroup",
]
