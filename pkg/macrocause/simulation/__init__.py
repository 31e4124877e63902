"""Random joints, SCM sampling and tie probes."""
from .scm import (
    build_fig1_scm,
    exact_proportion_dataset,
    fit_fig1_logits,
    sample_dataset,
    sample_joint,
    softmax_logits,
    uniform_utility,
)
from .prop2 import (
    find_gamma_violation,
    pair_violations,
    plant_duplicate_tie,
    planted_refinement_probe,
    prop2_probe,
    solve_gamma_tie,
)

__all__ = [
    "build_fig1_scm",
    "exact_proportion_dataset",
    "fit_fig1_logits",
    "sample_dataset",
    "sample_joint",
    "softmax_logits",
    "uniform_utility",
    "find_gamma_violation",
    "pair_violations",
    "plant_duplicate_tie",
    "planted_refinement_probe",
    "prop2_probe",
    "solve_gamma_tie",
]
