"""Macro-level CPTs and utility tables built from partitions."""
from typing import Optional, Sequence

import logging
import numpy as np

from macrocause.models.errors import DegenerateClassError, ShapeError
from macrocause.models.schemas import Cpt, CptKind, Partition, SampleSet, UtilityTable, ValueSpace

logger = logging.getLogger(__name__)


def coarse_space(partition: Partition) -> ValueSpace:
    """Value space of macro-values, labelled by their joined members."""
    return ValueSpace(labels=tuple(partition.macro_labels()))


def indicator(partition: Partition) -> np.ndarray:
    """0/1 matrix mapping values (rows) to classes (columns)."""
    out = np.zeros((len(partition.space), partition.n_classes))
    out[np.arange(len(partition.space)), partition.assignment()] = 1.0
    return out


def _check_spaces(cause_space: ValueSpace, effect_space: ValueSpace,
                  cause_part: Partition, effect_part: Partition) -> None:
    if cause_part.space != cause_space:
        raise ShapeError("cause partition is not over the table's cause space")
    if effect_part.space != effect_space:
        raise ShapeError("effect partition is not over the table's effect space")


def _marginal(cause_marginal: Sequence[float], n: int) -> np.ndarray:
    weights = np.asarray(cause_marginal, dtype=float)
    if weights.shape != (n,):
        raise ShapeError(f"cause marginal has shape {weights.shape}, expected {(n,)}")
    if np.any(weights < 0):
        raise ValueError("cause marginal must be non-negative")
    return weights


def class_weights(weights: np.ndarray, members: Sequence[int], space: ValueSpace) -> np.ndarray:
    """Weights of ``members`` renormalised within the class."""
    local = weights[list(members)]
    total = local.sum()
    if total <= 0:
        names = [space.labels[i] for i in members]
        raise DegenerateClassError(f"class {names} has zero marginal mass")
    return local / total


def coarsen_cpt(cpt: Cpt, cause_part: Partition, effect_part: Partition,
                cause_marginal: Sequence[float]) -> Cpt:
    """Sum effect columns within a class and average cause rows by the cause marginal."""
    _check_spaces(cpt.cause_space, cpt.effect_space, cause_part, effect_part)
    weights = _marginal(cause_marginal, cpt.n_causes)
    summed = cpt.rows @ indicator(effect_part)
    rows = np.vstack([
        class_weights(weights, members, cpt.cause_space) @ summed[list(members)]
        for members in cause_part.classes
    ])
    return Cpt(
        cause_space=coarse_space(cause_part),
        effect_space=coarse_space(effect_part),
        rows=rows,
        kind=cpt.kind,
    )


def coarsen_utility(util: UtilityTable, cause_part: Partition, effect_part: Partition,
                    cause_marginal: Sequence[float], cpt: Optional[Cpt] = None) -> UtilityTable:
    """Average utilities within classes.

    Effect columns are weighted by the row's conditional probabilities from
    ``cpt`` (uniformly when no CPT is given or the class has no mass in that
    row); cause rows by the renormalised cause marginal.
    """
    _check_spaces(util.cause_space, util.effect_space, cause_part, effect_part)
    if cpt is not None:
        _check_spaces(cpt.cause_space, cpt.effect_space, cause_part, effect_part)
    weights = _marginal(cause_marginal, len(util.cause_space))

    by_effect = np.empty((len(util.cause_space), effect_part.n_classes))
    for k, members in enumerate(effect_part.classes):
        cols = list(members)
        if len(cols) == 1:
            by_effect[:, k] = util.values[:, cols[0]]
            continue
        for c in range(len(util.cause_space)):
            probs = cpt.rows[c, cols] if cpt is not None else np.ones(len(cols))
            if probs.sum() <= 0:
                probs = np.ones(len(cols))
            by_effect[c, k] = probs @ util.values[c, cols] / probs.sum()

    values = np.empty((cause_part.n_classes, effect_part.n_classes))
    for k, members in enumerate(cause_part.classes):
        if len(members) == 1:
            values[k] = by_effect[members[0]]
        else:
            values[k] = class_weights(weights, members, util.cause_space) @ by_effect[list(members)]
    return UtilityTable(
        cause_space=coarse_space(cause_part),
        effect_space=coarse_space(effect_part),
        values=values,
    )


def empirical_coarse_cpt(data: SampleSet, cause_part: Partition, effect_part: Partition,
                         alpha: float = 0.0) -> Cpt:
    """Coarse observational CPT from record counts, with optional Laplace smoothing."""
    _check_spaces(data.cause_space, data.effect_space, cause_part, effect_part)
    counts = indicator(cause_part).T @ data.counts() @ indicator(effect_part)
    if alpha > 0:
        logger.info(f"Applying Laplace smoothing alpha={alpha} to coarse counts")
        counts = counts + alpha
    totals = counts.sum(axis=1, keepdims=True)
    empty = np.flatnonzero(totals[:, 0] <= 0)
    if empty.size:
        raise DegenerateClassError(f"cause class {cause_part.macro_labels()[empty[0]]!r} has no records")
    return Cpt(
        cause_space=coarse_space(cause_part),
        effect_space=coarse_space(effect_part),
        rows=counts / totals,
        kind=CptKind.OBSERVATIONAL,
    )


def uniform_marginal(space: ValueSpace) -> np.ndarray:
    return np.full(len(space), 1.0 / len(space))
