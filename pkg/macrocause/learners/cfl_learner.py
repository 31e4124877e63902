"""Observational causal feature learning from (cause, effect) samples."""
from typing import Any, Dict, Optional

import logging
import numpy as np
from sklearn.neighbors import KNeighborsRegressor

from macrocause.core.coarsen import empirical_coarse_cpt
from macrocause.core.partitions import partition_from_labels
from macrocause.learners.clustering import cluster, effect_value_features
from macrocause.models.errors import CodingError
from macrocause.models.schemas import ClusterConfig, CoarseningResult, EffectCoding, SampleSet

logger = logging.getLogger(__name__)


def _scalar_or_vector(row: np.ndarray) -> Any:
    return float(row[0]) if row.shape == (1,) else row


class CflLearner:
    """Regress, cluster causes, build kNN effect features, cluster effects."""

    def effect_targets(self, data: SampleSet, coding: EffectCoding = EffectCoding.NUMERIC,
                       codes: Optional[Dict[str, float]] = None) -> np.ndarray:
        """Regression target of every sample as an (N, d) array."""
        if data.continuous_effects:
            return data.effect_points()
        labels = data.effect_space.labels
        if coding is EffectCoding.ONEHOT:
            return np.eye(len(labels))[data.effect_index]
        if coding is EffectCoding.ENUMERATION:
            return data.effect_index.astype(float).reshape(-1, 1)
        if codes is not None:
            missing = [label for label in labels if label not in codes]
            if missing:
                raise CodingError(f"no numeric code supplied for effect values {missing}")
            table = np.array([float(codes[label]) for label in labels])
        else:
            try:
                table = np.array([float(label) for label in labels])
            except ValueError:
                raise CodingError(
                    f"effect labels {list(labels)} are not numeric; supply effect codes or another coding") from None
        return table[data.effect_index].reshape(-1, 1)

    def conditional_means(self, data: SampleSet, targets: np.ndarray, knn_k: int = 5) -> np.ndarray:
        """Mean target per distinct cause value (rows follow the cause space)."""
        targets = np.asarray(targets, dtype=float).reshape(data.size, -1)
        if data.continuous_causes:
            model = KNeighborsRegressor(n_neighbors=min(knn_k, data.size))
            model.fit(data.cause_points(), targets)
            return np.asarray(model.predict(data.cause_vectors)).reshape(len(data.cause_space), -1)
        sums = np.zeros((len(data.cause_space), targets.shape[1]))
        np.add.at(sums, data.cause_index, targets)
        counts = np.bincount(data.cause_index, minlength=len(data.cause_space))
        return sums / counts[:, None]

    def regress_conditional_mean(self, data: SampleSet, cfg: Optional[ClusterConfig] = None) -> Dict[str, Any]:
        """L2-optimal constant per cause value: the empirical conditional mean of the coded effect."""
        cfg = cfg or ClusterConfig.tolerance(0.0)
        targets = self.effect_targets(data, cfg.effect_coding, cfg.effect_codes)
        means = self.conditional_means(data, targets, cfg.knn_k)
        return {label: _scalar_or_vector(means[j]) for j, label in enumerate(data.cause_space.labels)}

    def run_cfl(self, data: SampleSet, cfg: ClusterConfig) -> CoarseningResult:
        targets = self.effect_targets(data, cfg.effect_coding, cfg.effect_codes)
        means = self.conditional_means(data, targets, cfg.knn_k)

        sample_labels = cluster(means[data.cause_index], cfg)
        value_labels = np.empty(len(data.cause_space), dtype=int)
        value_labels[data.cause_index] = sample_labels
        cause_partition = partition_from_labels(data.cause_space, value_labels)

        features = effect_value_features(data, cause_partition.assignment()[data.cause_index], cfg.knn_k)
        effect_labels = np.empty(len(data.effect_space), dtype=int)
        effect_labels[data.effect_index] = cluster(features[data.effect_index], cfg)
        effect_partition = partition_from_labels(data.effect_space, effect_labels)

        coarse_cpt = empirical_coarse_cpt(data, cause_partition, effect_partition, cfg.smoothing_alpha)
        logger.info(f"CFL on {data.size} samples: {cause_partition.n_classes} cause classes, "
                    f"{effect_partition.n_classes} effect classes")
        return CoarseningResult(
            cause_partition=cause_partition,
            effect_partition=effect_partition,
            coarse_cpt=coarse_cpt,
            cause_statistic={label: _scalar_or_vector(means[j]) for j, label in enumerate(data.cause_space.labels)},
            effect_features={label: features[i].tolist() for i, label in enumerate(data.effect_space.labels)},
        )


# Singleton instance
cfl_learner = CflLearner()


def regress_conditional_mean(data: SampleSet, cfg: Optional[ClusterConfig] = None) -> Dict[str, Any]:
    return cfl_learner.regress_conditional_mean(data, cfg)


def run_cfl(data: SampleSet, cfg: ClusterConfig) -> CoarseningResult:
    return cfl_learner.run_cfl(data, cfg)
