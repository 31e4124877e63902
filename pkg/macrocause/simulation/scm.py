"""Random joints, the two-layer logit SCM and ancestral sampling."""
from typing import Optional, Sequence

import logging
import numpy as np
from pydantic import BaseModel

from macrocause.config.settings import settings
from macrocause.models.errors import InputError, ShapeError, SolverError
from macrocause.models.schemas import ConfoundedJoint, Cpt, SampleSet, UtilityTable, ValueSpace

logger = logging.getLogger(__name__)

SCM_VALUES = ("-2", "-1", "1", "2")

# Observational p(E | C) of the SCM, one row per cause value in SCM_VALUES order.
SCM_OBSERVATIONAL_ROWS = np.array([
    [0.248, 0.189, 0.315, 0.248],
    [0.252, 0.248, 0.248, 0.252],
    [0.252, 0.248, 0.248, 0.252],
    [0.248, 0.315, 0.189, 0.248],
])

# Z1 value under which each cause value is observed; Z2 picks the member within the pair.
SCM_OBSERVED_Z1 = np.array([0, 0, 1, 1])


class LogitModel(BaseModel):
    """Per-effect logits alpha + c * beta + z1 * gamma."""
    alpha: np.ndarray
    beta: np.ndarray
    gamma: np.ndarray

    class Config:
        frozen = True
        arbitrary_types_allowed = True


def softmax(x: np.ndarray, axis: int = -1) -> np.ndarray:
    """Softmax along ``axis`` with the max subtracted for numerical stability."""
    y = np.asarray(x, dtype=float)
    y = np.exp(y - np.max(y, axis=axis, keepdims=True))
    return y / np.sum(y, axis=axis, keepdims=True)


def softmax_logits(model: LogitModel, c: float, z1: float) -> np.ndarray:
    return softmax(model.alpha + c * model.beta + z1 * model.gamma)


def fit_fig1_logits() -> LogitModel:
    """
    Least-squares logits reproducing the observed conditional rows.

    Softmax ignores a per-row constant, so each row's log-probabilities are
    centred before solving [1, c, z1] @ [alpha; beta; gamma] = centred logits.
    """
    design = np.column_stack([np.ones(4), np.array(SCM_VALUES, dtype=float), SCM_OBSERVED_Z1])
    logits = np.log(SCM_OBSERVATIONAL_ROWS)
    centred = logits - logits.mean(axis=1, keepdims=True)
    coef, _, rank, _ = np.linalg.lstsq(design, centred, rcond=None)
    if rank < design.shape[1]:
        raise SolverError(f"logit design matrix has rank {rank}, expected {design.shape[1]}")
    residual = np.abs(design @ coef - centred).max()
    logger.info(f"Fitted SCM logits, max residual {residual:.2e}")
    return LogitModel(alpha=coef[0], beta=coef[1], gamma=coef[2])


def build_fig1_scm() -> ConfoundedJoint:
    """
    Confounded joint of the two-layer SCM over C, E in {-2, -1, 1, 2} and Z1 in {0, 1}.

    C is determined by (Z1, Z2) with Z2 marginalised out, so each Z1 value
    supports two causes with probability .5. Observed (c, z1) combinations
    use the observational rows directly; the other four come from the
    fitted logit model.
    """
    model = fit_fig1_logits()
    m = len(SCM_VALUES)
    iota = np.empty((m, 2, m))
    beta = np.zeros((m, 2))
    for j, c in enumerate(SCM_VALUES):
        beta[j, SCM_OBSERVED_Z1[j]] = 0.5
        for z1 in (0, 1):
            if z1 == SCM_OBSERVED_Z1[j]:
                iota[:, z1, j] = SCM_OBSERVATIONAL_ROWS[j]
            else:
                iota[:, z1, j] = softmax_logits(model, float(c), z1)
    space = ValueSpace(labels=SCM_VALUES)
    return ConfoundedJoint(
        cause_space=space,
        effect_space=space,
        confounder_space=ValueSpace(labels=("0", "1")),
        iota=iota,
        beta=beta,
        gamma=np.array([0.5, 0.5]),
    )


def _simplex(rng: np.random.Generator, size: int, count: Sequence[int] = ()) -> np.ndarray:
    """Uniform draws from the probability simplex along axis 0 (normalised exponential spacings)."""
    draws = rng.exponential(size=(size, *count))
    return draws / draws.sum(axis=0, keepdims=True)


def sample_joint(n_causes: int, n_effects: int, n_confounders: int,
                 rng: Optional[np.random.Generator] = None) -> ConfoundedJoint:
    """Joint whose iota, beta and gamma distributions are each uniform on their simplex."""
    if min(n_causes, n_effects, n_confounders) < 1:
        raise ShapeError(f"dimensions must be at least 1, got {(n_causes, n_effects, n_confounders)}")
    rng = rng if rng is not None else np.random.default_rng(settings.seed)
    return ConfoundedJoint(
        cause_space=ValueSpace(labels=[f"c{j}" for j in range(n_causes)]),
        effect_space=ValueSpace(labels=[f"e{i}" for i in range(n_effects)]),
        confounder_space=ValueSpace(labels=[f"z{l}" for l in range(n_confounders)]),
        iota=_simplex(rng, n_effects, (n_confounders, n_causes)),
        beta=_simplex(rng, n_causes, (n_confounders,)),
        gamma=_simplex(rng, n_confounders),
    )


def uniform_utility(cause_space: ValueSpace, effect_space: ValueSpace, rng: np.random.Generator,
                    low: Optional[float] = None, high: Optional[float] = None) -> UtilityTable:
    low = settings.utility_low if low is None else low
    high = settings.utility_high if high is None else high
    values = rng.uniform(low, high, size=(len(cause_space), len(effect_space)))
    return UtilityTable(cause_space=cause_space, effect_space=effect_space, values=values)


def _inverse_cdf(cumulative: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Index of the first cumulative entry above u, row by row."""
    index = (u[:, None] >= cumulative).sum(axis=1)
    return np.minimum(index, cumulative.shape[1] - 1)


def sample_dataset(joint: ConfoundedJoint, n: int, rng: Optional[np.random.Generator] = None,
                   util: Optional[UtilityTable] = None) -> SampleSet:
    """N i.i.d. ancestral samples: z, then c given z, then e given (z, c)."""
    if n < 1:
        raise ShapeError("sample count must be at least 1")
    rng = rng if rng is not None else np.random.default_rng(settings.seed)
    z = _inverse_cdf(np.cumsum(joint.gamma)[None, :].repeat(n, axis=0), rng.random(n))
    c = _inverse_cdf(np.cumsum(joint.beta, axis=0)[:, z].T, rng.random(n))
    e = _inverse_cdf(np.cumsum(joint.iota, axis=0)[:, z, c].T, rng.random(n))
    utilities = None
    if util is not None:
        utilities = util.submatrix(joint.cause_space.labels, joint.effect_space.labels)[c, e]
    causes = np.array(joint.cause_space.labels, dtype=object)[c]
    effects = np.array(joint.effect_space.labels, dtype=object)[e]
    logger.info(f"Sampled {n} records from a joint with dims {joint.dims}")
    return SampleSet.from_columns(list(causes), list(effects), utilities,
                                  cause_space=joint.cause_space, effect_space=joint.effect_space)


def exact_proportion_dataset(cpt: Cpt, scale: int, cause_weights: Optional[Sequence[float]] = None,
                             util: Optional[UtilityTable] = None) -> SampleSet:
    """
    Records whose counts are exactly ``scale * weight * p(e | c)``.

    Each count must come out integral; cause values with zero weight are left out.
    """
    weights = np.ones(cpt.n_causes) if cause_weights is None else np.asarray(cause_weights, dtype=float)
    if weights.shape != (cpt.n_causes,):
        raise ShapeError(f"cause weights have shape {weights.shape}, expected {(cpt.n_causes,)}")
    raw = scale * weights[:, None] * cpt.rows
    counts = np.rint(raw).astype(int)
    if np.abs(raw - counts).max() > 1e-6:
        raise InputError(f"scale {scale} does not give integral counts for this CPT")
    causes, effects, utilities = [], [], []
    for j, c in enumerate(cpt.cause_space.labels):
        for i, e in enumerate(cpt.effect_space.labels):
            causes.extend([c] * counts[j, i])
            effects.extend([e] * counts[j, i])
            if util is not None:
                utilities.extend([util.lookup(c, e)] * counts[j, i])
    return SampleSet.from_columns(causes, effects, utilities if util is not None else None,
                                  cause_space=cpt.cause_space, effect_space=cpt.effect_space)
