"""Exact confounded joints: conditionals, marginals and the tie constraint."""
from pathlib import Path
from typing import Any, Dict, Union

import json
import logging
import numpy as np

from macrocause.models.errors import InputError, ShapeError, ZeroMarginalError
from macrocause.models.schemas import ConfoundedJoint, Cpt, CptKind, UtilityTable, ValueSpace

logger = logging.getLogger(__name__)


class DistributionService:
    """Computations over a ConfoundedJoint in its iota/beta/gamma factorisation.

    Arrays are effects-major: iota[i, l, j] = p(e_i | z_l, c_j).
    """

    def joint_table(self, joint: ConfoundedJoint) -> np.ndarray:
        """Full p(e_i, z_l, c_j) array."""
        return np.einsum("ilj,jl,l->ilj", joint.iota, joint.beta, joint.gamma)

    def cause_marginal(self, joint: ConfoundedJoint) -> np.ndarray:
        """p(c_j) = sum_l beta[j, l] gamma[l]."""
        return joint.beta @ joint.gamma

    def interventional_cpt(self, joint: ConfoundedJoint) -> Cpt:
        """p(e_i | do(c_j)) = sum_l iota[i, l, j] gamma[l]."""
        rows = np.einsum("ilj,l->ji", joint.iota, joint.gamma)
        return Cpt(cause_space=joint.cause_space, effect_space=joint.effect_space,
                   rows=rows, kind=CptKind.INTERVENTIONAL)

    def observational_cpt(self, joint: ConfoundedJoint) -> Cpt:
        """p(e_i | c_j) = sum_l iota[i, l, j] beta[j, l] gamma[l] / p(c_j)."""
        marginal = self.cause_marginal(joint)
        self._require_mass(joint, marginal, range(len(marginal)))
        rows = np.einsum("ilj,jl,l->ji", joint.iota, joint.beta, joint.gamma) / marginal[:, None]
        return Cpt(cause_space=joint.cause_space, effect_space=joint.effect_space,
                   rows=rows, kind=CptKind.OBSERVATIONAL)

    def constraint_matrix(self, joint: ConfoundedJoint, util: UtilityTable, j: int, k: int) -> np.ndarray:
        """Matrix A with eq_constraint_residual(j, k) = gamma^T A gamma.

        A[l', l] = beta[k, l'] a_j[l] - beta[j, l'] a_k[l], where
        a_j[l] = sum_i u(c_j, e_i) iota[i, l, j] beta[j, l].
        """
        self._check_pair(joint, util, j, k)
        weighted = np.einsum("ji,ilj,jl->jl", util.values, joint.iota, joint.beta)
        return np.outer(joint.beta[k], weighted[j]) - np.outer(joint.beta[j], weighted[k])

    def eq_constraint_residual(self, joint: ConfoundedJoint, util: UtilityTable, j: int, k: int) -> float:
        """Left minus right of the observational expected-utility tie constraint.

        Equals p(c_j) p(c_k) (EU_obs(c_j) - EU_obs(c_k)).
        """
        self._check_pair(joint, util, j, k)
        self._require_mass(joint, self.cause_marginal(joint), (j, k))
        matrix = self.constraint_matrix(joint, util, j, k)
        return float(joint.gamma @ matrix @ joint.gamma)

    def to_dict(self, joint: ConfoundedJoint) -> Dict[str, Any]:
        return {
            "cause_labels": list(joint.cause_space.labels),
            "effect_labels": list(joint.effect_space.labels),
            "confounder_labels": list(joint.confounder_space.labels),
            "iota": joint.iota.tolist(),
            "beta": joint.beta.tolist(),
            "gamma": joint.gamma.tolist(),
        }

    def from_dict(self, document: Dict[str, Any]) -> ConfoundedJoint:
        try:
            return ConfoundedJoint(
                cause_space=ValueSpace(labels=document["cause_labels"]),
                effect_space=ValueSpace(labels=document["effect_labels"]),
                confounder_space=ValueSpace(labels=document["confounder_labels"]),
                iota=document["iota"],
                beta=document["beta"],
                gamma=document["gamma"],
            )
        except KeyError as e:
            raise InputError(f"joint document is missing key {e}") from None

    def load(self, path: Union[str, Path]) -> ConfoundedJoint:
        text = Path(path).read_text(encoding="utf-8")
        try:
            document = json.loads(text)
        except json.JSONDecodeError as e:
            raise InputError(f"invalid JSON in {path}: {e.msg}", line=e.lineno) from None
        joint = self.from_dict(document)
        logger.info(f"Loaded joint with dims {joint.dims} from {path}")
        return joint

    def save(self, joint: ConfoundedJoint, path: Union[str, Path]) -> None:
        Path(path).write_text(json.dumps(self.to_dict(joint), indent=2), encoding="utf-8")

    def _check_pair(self, joint: ConfoundedJoint, util: UtilityTable, j: int, k: int) -> None:
        if util.cause_space != joint.cause_space or util.effect_space != joint.effect_space:
            raise ShapeError("utility table spaces do not match the joint")
        m = len(joint.cause_space)
        if not (0 <= j < m and 0 <= k < m):
            raise ShapeError(f"cause indices ({j}, {k}) out of range for {m} causes")

    def _require_mass(self, joint: ConfoundedJoint, marginal: np.ndarray, indices) -> None:
        for j in indices:
            if marginal[j] <= 0:
                raise ZeroMarginalError(joint.cause_space.labels[j])


# Singleton instance
distribution_service = DistributionService()


def joint_table(joint: ConfoundedJoint) -> np.ndarray:
    return distribution_service.joint_table(joint)


def cause_marginal(joint: ConfoundedJoint) -> np.ndarray:
    return distribution_service.cause_marginal(joint)


def interventional_cpt(joint: ConfoundedJoint) -> Cpt:
    return distribution_service.interventional_cpt(joint)


def observational_cpt(joint: ConfoundedJoint) -> Cpt:
    return distribution_service.observational_cpt(joint)


def constraint_matrix(joint: ConfoundedJoint, util: UtilityTable, j: int, k: int) -> np.ndarray:
    return distribution_service.constraint_matrix(joint, util, j, k)


def eq_constraint_residual(joint: ConfoundedJoint, util: UtilityTable, j: int, k: int) -> float:
    return distribution_service.eq_constraint_residual(joint, util, j, k)
