"""Sample-based learners."""
from .clustering import cluster, knn_features
from .cfl_learner import cfl_learner, regress_conditional_mean, run_cfl
from .pcfl_learner import (
    pcfl_learner,
    regress_conditional_utility,
    effect_utility_profiles,
    run_pcfl,
    rbf_utility,
    grid_utility,
)

__all__ = [
    "cluster",
    "knn_features",
    "cfl_learner",
    "regress_conditional_mean",
    "run_cfl",
    "pcfl_learner",
    "regress_conditional_utility",
    "effect_utility_profiles",
    "run_pcfl",
    "rbf_utility",
    "grid_utility",
]
