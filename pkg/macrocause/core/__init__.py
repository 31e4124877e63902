"""Value-space partitions and macro-level tables."""
from .partitions import (
    UnionFind,
    identity_partition,
    total_partition,
    partition_from_pairs,
    partition_from_labels,
    refines,
    lift_partition,
    restrict_partition,
    relabel,
)
from .coarsen import (
    coarse_space,
    coarsen_cpt,
    coarsen_utility,
    empirical_coarse_cpt,
    uniform_marginal,
)

__all__ = [
    "UnionFind",
    "identity_partition",
    "total_partition",
    "partition_from_pairs",
    "partition_from_labels",
    "refines",
    "lift_partition",
    "restrict_partition",
    "relabel",
    "coarse_space",
    "coarsen_cpt",
    "coarsen_utility",
    "empirical_coarse_cpt",
    "uniform_marginal",
]
