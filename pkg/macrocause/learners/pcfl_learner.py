"""Pragmatic coarsening from (cause, effect, utility) samples."""
from typing import Dict, Optional

import logging
import numpy as np

from macrocause.core.coarsen import empirical_coarse_cpt
from macrocause.core.partitions import partition_from_labels
from macrocause.learners.cfl_learner import cfl_learner
from macrocause.learners.clustering import cluster
from macrocause.models.errors import ClusterConfigError, CoverageError, InputError
from macrocause.models.schemas import ClusterConfig, CoarseningResult, SampleSet, UtilityTable, ValueSpace

logger = logging.getLogger(__name__)


def rbf_utility(y, mean: float = 26.0, bandwidth: float = 0.02, shift: float = -1.0):
    """
    Shifted Gaussian kernel around ``mean`` of a temperature rounded to one decimal.

    u = shift + exp(-(y* - mean)^2 / bandwidth) / sqrt(bandwidth * pi), with
    y* the rounded temperature. Accepts scalars or arrays.
    """
    if bandwidth <= 0:
        raise ClusterConfigError(f"bandwidth must be positive, got {bandwidth}")
    rounded = np.round(np.asarray(y, dtype=float), 1)
    value = shift + np.exp(-((rounded - mean) ** 2) / bandwidth) / np.sqrt(bandwidth * np.pi)
    return float(value) if value.ndim == 0 else value


def grid_utility(field, mean: float = 26.0, bandwidth: float = 0.02, shift: float = -1.0) -> float:
    """Mean rbf_utility over the cells of a temperature grid."""
    return float(np.mean(rbf_utility(field, mean, bandwidth, shift)))


class PcflLearner:
    """Cluster causes by expected utility and effects by utility profile."""

    def regress_conditional_utility(self, data: SampleSet, knn_k: int = 5) -> Dict[str, float]:
        means = self._mean_utilities(data, knn_k)
        return {label: float(means[j]) for j, label in enumerate(data.cause_space.labels)}

    def effect_utility_profiles(self, data: SampleSet, cause_space: Optional[ValueSpace] = None,
                                util: Optional[UtilityTable] = None) -> Dict[str, np.ndarray]:
        """
        Utility of every effect value under each cause value.

        Taken from ``util`` when supplied, otherwise the mean observed utility
        of each (cause, effect) pair. With vector causes or effects the utility
        is treated as cause-independent and the profile is the effect value's
        mean observed utility.
        """
        profiles = self._profile_matrix(data, cause_space, util)
        return {label: profiles[i] for i, label in enumerate(data.effect_space.labels)}

    def run_pcfl(self, data: SampleSet, cfg: ClusterConfig, util: Optional[UtilityTable] = None) -> CoarseningResult:
        means = self._mean_utilities(data, cfg.knn_k)
        value_labels = np.empty(len(data.cause_space), dtype=int)
        value_labels[data.cause_index] = cluster(means[data.cause_index], cfg)
        cause_partition = partition_from_labels(data.cause_space, value_labels)

        profiles = self._profile_matrix(data, None, util)
        effect_labels = np.empty(len(data.effect_space), dtype=int)
        effect_labels[data.effect_index] = cluster(profiles[data.effect_index], cfg)
        effect_partition = partition_from_labels(data.effect_space, effect_labels)

        coarse_cpt = empirical_coarse_cpt(data, cause_partition, effect_partition, cfg.smoothing_alpha)
        logger.info(f"PCFL on {data.size} samples: {cause_partition.n_classes} cause classes, "
                    f"{effect_partition.n_classes} effect classes")
        return CoarseningResult(
            cause_partition=cause_partition,
            effect_partition=effect_partition,
            coarse_cpt=coarse_cpt,
            cause_statistic={label: float(means[j]) for j, label in enumerate(data.cause_space.labels)},
            effect_features={label: profiles[i].tolist() for i, label in enumerate(data.effect_space.labels)},
        )

    def _require_utilities(self, data: SampleSet) -> np.ndarray:
        if not data.has_utilities:
            raise InputError("pragmatic coarsening needs a utility for every record")
        return data.utilities

    def _mean_utilities(self, data: SampleSet, knn_k: int) -> np.ndarray:
        utilities = self._require_utilities(data)
        return cfl_learner.conditional_means(data, utilities, knn_k)[:, 0]

    def _profile_matrix(self, data: SampleSet, cause_space: Optional[ValueSpace],
                        util: Optional[UtilityTable]) -> np.ndarray:
        if util is not None:
            causes = cause_space or util.cause_space
            return util.submatrix(causes.labels, data.effect_space.labels).T

        utilities = self._require_utilities(data)
        n_effects = len(data.effect_space)
        if data.continuous_causes or data.continuous_effects:
            sums = np.bincount(data.effect_index, weights=utilities, minlength=n_effects)
            return (sums / np.bincount(data.effect_index, minlength=n_effects)).reshape(-1, 1)

        causes = cause_space or data.cause_space
        lookup = data.cause_space.positions()
        sums = np.zeros((len(data.cause_space), n_effects))
        counts = np.zeros_like(sums)
        np.add.at(sums, (data.cause_index, data.effect_index), utilities)
        np.add.at(counts, (data.cause_index, data.effect_index), 1.0)

        profiles = np.empty((n_effects, len(causes)))
        missing = []
        for col, label in enumerate(causes.labels):
            j = lookup.get(label)
            for i, effect in enumerate(data.effect_space.labels):
                if j is None or counts[j, i] == 0:
                    missing.append((label, effect))
                else:
                    profiles[i, col] = sums[j, i] / counts[j, i]
        if missing:
            raise CoverageError(missing)
        return profiles


# Singleton instance
pcfl_learner = PcflLearner()


def regress_conditional_utility(data: SampleSet) -> Dict[str, float]:
    return pcfl_learner.regress_conditional_utility(data)


def effect_utility_profiles(data: SampleSet, cause_space: Optional[ValueSpace] = None,
                            util: Optional[UtilityTable] = None) -> Dict[str, np.ndarray]:
    return pcfl_learner.effect_utility_profiles(data, cause_space, util)


def run_pcfl(data: SampleSet, cfg: ClusterConfig, util: Optional[UtilityTable] = None) -> CoarseningResult:
    return pcfl_learner.run_pcfl(data, cfg, util)
