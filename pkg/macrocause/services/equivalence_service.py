"""Equivalence relations over cause and effect values and their coarsenings."""
from typing import Optional

import logging
import numpy as np

from macrocause.config.settings import resolve_tolerance
from macrocause.core.partitions import partition_from_pairs
from macrocause.models.errors import KindError, ShapeError
from macrocause.models.schemas import (
    Cpt,
    CptKind,
    ExpectedUtilityProfile,
    Partition,
    Relation,
    UtilityTable,
    ValueSpace,
)

logger = logging.getLogger(__name__)


def _rows_agree(matrix: np.ndarray, tol: float) -> np.ndarray:
    """Pairwise table: rows equal entrywise within tol."""
    return np.all(np.abs(matrix[:, None, :] - matrix[None, :, :]) <= tol, axis=2)


def _values_agree(values: np.ndarray, tol: float) -> np.ndarray:
    return np.abs(values[:, None] - values[None, :]) <= tol


def _require_kind(cpt: Cpt, kind: CptKind, operation: str) -> None:
    if cpt.kind is not kind:
        raise KindError(f"{operation} needs an {kind.value} CPT, got {cpt.kind.value}")


def _require_matching(cpt: Cpt, util: UtilityTable) -> None:
    if cpt.cause_space != util.cause_space or cpt.effect_space != util.effect_space:
        raise ShapeError("CPT and utility table are over different value spaces")


class EquivalenceService:
    """The causal, observational and pragmatic equivalence relations.

    Approximate equality is closed transitively; tol should stay below half of
    the smallest true gap between distinct rows or expected utilities.
    """

    def expected_utilities(self, cpt: Cpt, util: UtilityTable) -> ExpectedUtilityProfile:
        _require_matching(cpt, util)
        values = np.einsum("ji,ji->j", util.values, cpt.rows)
        eta = float(values.max()) if cpt.kind is CptKind.INTERVENTIONAL else None
        return ExpectedUtilityProfile(space=cpt.cause_space, values=values, kind=cpt.kind, eta=eta)

    def causal_coarsening(self, int_cpt: Cpt, tol: Optional[float] = None) -> Partition:
        _require_kind(int_cpt, CptKind.INTERVENTIONAL, "causal coarsening")
        return self._row_coarsening(int_cpt, tol)

    def effect_coarsening(self, int_cpt: Cpt, tol: Optional[float] = None) -> Partition:
        _require_kind(int_cpt, CptKind.INTERVENTIONAL, "effect coarsening")
        return self._column_coarsening(int_cpt, tol)

    def observational_causal_coarsening(self, obs_cpt: Cpt, tol: Optional[float] = None) -> Partition:
        _require_kind(obs_cpt, CptKind.OBSERVATIONAL, "observational causal coarsening")
        return self._row_coarsening(obs_cpt, tol)

    def observational_effect_coarsening(self, obs_cpt: Cpt, tol: Optional[float] = None) -> Partition:
        _require_kind(obs_cpt, CptKind.OBSERVATIONAL, "observational effect coarsening")
        return self._column_coarsening(obs_cpt, tol)

    def pragmatic_causal_coarsening(self, int_cpt: Cpt, util: UtilityTable,
                                    tol: Optional[float] = None) -> Partition:
        """Boolean quotient: the values attaining eta against all others."""
        _require_kind(int_cpt, CptKind.INTERVENTIONAL, "pragmatic causal coarsening")
        tol = resolve_tolerance(tol)
        profile = self.expected_utilities(int_cpt, util)
        return self.maximizer_partition(int_cpt.cause_space, profile.values, tol)

    def pragmatic_effect_coarsening(self, util: UtilityTable, tol: Optional[float] = None) -> Partition:
        """Merge effect values whose utility columns agree under every cause value."""
        tol = resolve_tolerance(tol)
        return partition_from_pairs(util.effect_space, _rows_agree(util.values.T, tol))

    def observational_pragmatic_causal_coarsening(self, obs_cpt: Cpt, util: UtilityTable,
                                                  tol: Optional[float] = None) -> Partition:
        """Merge cause values with equal observational expected utility."""
        _require_kind(obs_cpt, CptKind.OBSERVATIONAL, "observational pragmatic causal coarsening")
        tol = resolve_tolerance(tol)
        profile = self.expected_utilities(obs_cpt, util)
        return partition_from_pairs(obs_cpt.cause_space, _values_agree(profile.values, tol))

    def maximizer_partition(self, space: ValueSpace, values: np.ndarray, tol: float) -> Partition:
        """Values within tol of the maximum form one class, the rest the other."""
        values = np.asarray(values, dtype=float)
        top = values >= values.max() - tol
        classes = [np.flatnonzero(top).tolist(), np.flatnonzero(~top).tolist()]
        return Partition.canonical(space, [c for c in classes if c])

    def coarsen(self, relation: Relation, cpt: Optional[Cpt] = None, util: Optional[UtilityTable] = None,
                tol: Optional[float] = None) -> Partition:
        """Dispatch to the coarsening named by ``relation``."""
        relation = Relation(relation)
        if relation in (Relation.PRAGMATIC_CAUSAL, Relation.PRAGMATIC_EFFECT,
                        Relation.OBSERVATIONAL_PRAGMATIC_CAUSAL) and util is None:
            raise ShapeError(f"relation {relation.value!r} needs a utility table")
        if relation is not Relation.PRAGMATIC_EFFECT and cpt is None:
            raise ShapeError(f"relation {relation.value!r} needs a CPT")
        if relation is Relation.CAUSAL:
            return self.causal_coarsening(cpt, tol)
        if relation is Relation.EFFECT:
            return self.effect_coarsening(cpt, tol)
        if relation is Relation.OBSERVATIONAL_CAUSAL:
            return self.observational_causal_coarsening(cpt, tol)
        if relation is Relation.OBSERVATIONAL_EFFECT:
            return self.observational_effect_coarsening(cpt, tol)
        if relation is Relation.PRAGMATIC_CAUSAL:
            return self.pragmatic_causal_coarsening(cpt, util, tol)
        if relation is Relation.PRAGMATIC_EFFECT:
            return self.pragmatic_effect_coarsening(util, tol)
        return self.observational_pragmatic_causal_coarsening(cpt, util, tol)

    def _row_coarsening(self, cpt: Cpt, tol: Optional[float]) -> Partition:
        partition = partition_from_pairs(cpt.cause_space, _rows_agree(cpt.rows, resolve_tolerance(tol)))
        logger.info(f"Cause coarsening ({cpt.kind.value}): {partition.n_classes} of {cpt.n_causes} classes")
        return partition

    def _column_coarsening(self, cpt: Cpt, tol: Optional[float]) -> Partition:
        partition = partition_from_pairs(cpt.effect_space, _rows_agree(cpt.rows.T, resolve_tolerance(tol)))
        logger.info(f"Effect coarsening ({cpt.kind.value}): {partition.n_classes} of {cpt.n_effects} classes")
        return partition


# Singleton instance
equivalence_service = EquivalenceService()


def expected_utilities(cpt: Cpt, util: UtilityTable) -> ExpectedUtilityProfile:
    return equivalence_service.expected_utilities(cpt, util)


def causal_coarsening(int_cpt: Cpt, tol: Optional[float] = None) -> Partition:
    return equivalence_service.causal_coarsening(int_cpt, tol)


def effect_coarsening(int_cpt: Cpt, tol: Optional[float] = None) -> Partition:
    return equivalence_service.effect_coarsening(int_cpt, tol)


def observational_causal_coarsening(obs_cpt: Cpt, tol: Optional[float] = None) -> Partition:
    return equivalence_service.observational_causal_coarsening(obs_cpt, tol)


def observational_effect_coarsening(obs_cpt: Cpt, tol: Optional[float] = None) -> Partition:
    return equivalence_service.observational_effect_coarsening(obs_cpt, tol)


def pragmatic_causal_coarsening(int_cpt: Cpt, util: UtilityTable, tol: Optional[float] = None) -> Partition:
    return equivalence_service.pragmatic_causal_coarsening(int_cpt, util, tol)


def pragmatic_effect_coarsening(util: UtilityTable, tol: Optional[float] = None) -> Partition:
    return equivalence_service.pragmatic_effect_coarsening(util, tol)


def observational_pragmatic_causal_coarsening(obs_cpt: Cpt, util: UtilityTable,
                                              tol: Optional[float] = None) -> Partition:
    return equivalence_service.observational_pragmatic_causal_coarsening(obs_cpt, util, tol)
