"""Clustering and kNN density features shared by the sample-based learners."""
from typing import Dict, Optional, Sequence

import logging
import numpy as np
from sklearn.cluster import KMeans
from sklearn.neighbors import NearestNeighbors

from macrocause.core.partitions import UnionFind
from macrocause.models.errors import ClusterConfigError
from macrocause.models.schemas import ClusterConfig, ClusterMethod, SampleSet

logger = logging.getLogger(__name__)


def _as_points(points) -> np.ndarray:
    arr = np.asarray(points, dtype=float)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    if arr.ndim != 2 or arr.shape[0] == 0:
        raise ClusterConfigError("clustering needs a non-empty list of real vectors")
    if not np.all(np.isfinite(arr)):
        raise ClusterConfigError("clustering inputs must be finite")
    return arr


def _first_appearance(labels: np.ndarray) -> np.ndarray:
    """Renumber labels 0, 1, ... in order of first appearance."""
    mapping: Dict[int, int] = {}
    out = np.empty(len(labels), dtype=int)
    for i, label in enumerate(labels):
        out[i] = mapping.setdefault(int(label), len(mapping))
    return out


def _tolerance_link(distinct: np.ndarray, tol: float) -> np.ndarray:
    """Single-linkage components of the graph joining points at distance <= tol."""
    neighbours = NearestNeighbors(radius=tol).fit(distinct)
    adjacency = neighbours.radius_neighbors(distinct, return_distance=False)
    uf = UnionFind(len(distinct))
    for i, row in enumerate(adjacency):
        for j in row:
            uf.union(i, int(j))
    return np.array([uf.find(i) for i in range(len(distinct))])


def _kmeans(distinct: np.ndarray, counts: np.ndarray, k: int, seed: int) -> np.ndarray:
    if k > len(distinct):
        raise ClusterConfigError(f"k_clusters={k} exceeds the {len(distinct)} distinct points")
    model = KMeans(n_clusters=k, init="k-means++", n_init=10, algorithm="lloyd", random_state=seed)
    return model.fit(distinct, sample_weight=counts).labels_


def cluster(points, cfg: ClusterConfig) -> np.ndarray:
    """
    Cluster label for every point.

    Points are deduplicated first and each distinct point carries its
    multiplicity, so equal inputs always share a label. Labels are numbered
    by first appearance in ``points``.
    """
    arr = _as_points(points)
    distinct, inverse, counts = np.unique(arr, axis=0, return_inverse=True, return_counts=True)
    inverse = np.asarray(inverse).reshape(-1)
    if cfg.method is ClusterMethod.TOLERANCE_LINK:
        by_distinct = _tolerance_link(distinct, cfg.cluster_tol)
    else:
        by_distinct = _kmeans(distinct, counts, cfg.k_clusters, cfg.seed)
    labels = _first_appearance(by_distinct[inverse])
    logger.info(f"Clustered {len(arr)} points ({len(distinct)} distinct) into {labels.max() + 1} clusters "
                f"with {cfg.method.value}")
    return labels


def _check_cluster_labels(data: SampleSet, cause_labels: Sequence[int]) -> np.ndarray:
    labels = np.asarray(cause_labels, dtype=int).reshape(-1)
    if labels.shape != (data.size,):
        raise ClusterConfigError(f"{labels.shape[0]} cause labels for {data.size} samples")
    return labels


def effect_value_features(data: SampleSet, cause_labels: Sequence[int], knn_k: int = 5) -> np.ndarray:
    """
    kNN density feature of every distinct effect value (rows) against every cause cluster (columns).

    Vector effects use the Euclidean distance to the ``knn_k``-th nearest
    neighbour within the cluster's effect samples, skipping one copy of the
    query when it belongs to the cluster. Label effects use the tie limit of
    that distance, the frequency of the value within the cluster.
    """
    labels = _check_cluster_labels(data, cause_labels)
    clusters = np.unique(labels)
    n_values = len(data.effect_space)
    features = np.empty((n_values, len(clusters)))

    for col, beta in enumerate(clusters):
        members = data.effect_index[labels == beta]
        if not data.continuous_effects:
            # frequencies need no neighbour rank, so any non-empty cluster will do
            features[:, col] = np.bincount(members, minlength=n_values) / len(members)
            continue
        if len(members) < knn_k + 1:
            raise ClusterConfigError(
                f"cause cluster {int(beta)} has {len(members)} effect samples; knn_k={knn_k} needs at least {knn_k + 1}")
        model = NearestNeighbors(n_neighbors=knn_k + 1).fit(data.effect_vectors[members])
        distances, _ = model.kneighbors(data.effect_vectors)
        present = np.isin(np.arange(n_values), members)
        # a member's own copy sits at distance 0 among its neighbours
        features[:, col] = np.where(present, distances[:, knn_k], distances[:, knn_k - 1])
    return features


def knn_features(data: SampleSet, cause_labels: Sequence[int], knn_k: Optional[int] = None) -> np.ndarray:
    """Per-sample kNN density features, one column per cause cluster."""
    knn_k = 5 if knn_k is None else knn_k
    if knn_k < 1:
        raise ClusterConfigError("knn_k must be at least 1")
    return effect_value_features(data, cause_labels, knn_k)[data.effect_index]
