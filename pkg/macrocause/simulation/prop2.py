"""Empirical probes of the observational-to-interventional quotient claims."""
from typing import Callable, List, Optional, Sequence, Tuple

import logging
import numpy as np

from macrocause.config.settings import resolve_tolerance, settings
from macrocause.core.partitions import refines
from macrocause.models.errors import ShapeError, SolverError
from macrocause.models.schemas import ConfoundedJoint, Prop2Report, RefinementReport, UtilityTable, ValueSpace
from macrocause.services.distribution_service import distribution_service
from macrocause.services.equivalence_service import equivalence_service
from macrocause.simulation.scm import sample_joint, uniform_utility

logger = logging.getLogger(__name__)

UtilitySampler = Callable[[np.random.Generator, ValueSpace, ValueSpace], UtilityTable]
Pair = Tuple[int, int]

RELATIONS = ("pragmatic", "causal")


def _default_sampler(rng: np.random.Generator, cause_space: ValueSpace, effect_space: ValueSpace) -> UtilityTable:
    return uniform_utility(cause_space, effect_space, rng)


def _expected_utilities(joint: ConfoundedJoint, util: UtilityTable) -> Tuple[np.ndarray, np.ndarray]:
    obs = equivalence_service.expected_utilities(distribution_service.observational_cpt(joint), util).values
    intv = equivalence_service.expected_utilities(distribution_service.interventional_cpt(joint), util).values
    return obs, intv


def pair_violations(joint: ConfoundedJoint, util: UtilityTable, eps: float,
                    delta: Optional[float] = None) -> Tuple[List[Pair], List[Pair]]:
    """
    Cause pairs flagged as approximate observational pragmatic ties, and the
    flagged pairs that break the pragmatic relation.

    A flagged pair has |EU_obs(j) - EU_obs(k)| < eps. It is a violation when
    exactly one member attains eta within delta and the interventional gap
    exceeds the observational gap by more than delta.
    """
    delta = settings.prop2_delta if delta is None else delta
    obs, intv = _expected_utilities(joint, util)
    top = intv >= intv.max() - delta
    flagged, violations = [], []
    m = len(obs)
    for j in range(m):
        for k in range(j + 1, m):
            gap = abs(obs[j] - obs[k])
            if gap >= eps:
                continue
            flagged.append((j, k))
            if top[j] != top[k] and abs(intv[j] - intv[k]) > gap + delta:
                violations.append((j, k))
    return flagged, violations


def prop2_probe(dims: Sequence[int], trials: int, eps_grid: Sequence[float], delta: Optional[float] = None,
                util_sampler: Optional[UtilitySampler] = None, seed: int = 0) -> Prop2Report:
    """eps-relaxation curve of observational pragmatic ties that fail to survive intervention."""
    m, n, w = (int(d) for d in dims)
    delta = settings.prop2_delta if delta is None else delta
    if delta <= 0:
        raise ValueError("delta must be positive")
    eps_grid = [float(eps) for eps in eps_grid]
    if not eps_grid or any(eps <= 0 for eps in eps_grid):
        raise ValueError("eps grid must be non-empty and positive")
    sampler = util_sampler or _default_sampler

    flagged = np.zeros(len(eps_grid), dtype=int)
    violations = np.zeros(len(eps_grid), dtype=int)
    for trial in range(trials):
        rng = np.random.default_rng([seed, trial])
        joint = sample_joint(m, n, w, rng)
        util = sampler(rng, joint.cause_space, joint.effect_space)
        for col, eps in enumerate(eps_grid):
            found, broken = pair_violations(joint, util, eps, delta)
            flagged[col] += len(found)
            violations[col] += len(broken)

    pairs = m * (m - 1) // 2
    examined = trials * pairs
    logger.info(f"Probe over {trials} trials at dims {(m, n, w)}: violations {violations.tolist()}")
    return Prop2Report(
        dims=(m, n, w),
        trials=trials,
        pairs_per_trial=pairs,
        seed=seed,
        delta=delta,
        eps_grid=eps_grid,
        flagged=flagged.tolist(),
        violations=violations.tolist(),
        rates=[v / examined if examined else 0.0 for v in violations],
        conditional_rates=[v / f if f else 0.0 for v, f in zip(violations, flagged)],
    )


def plant_duplicate_tie(joint: ConfoundedJoint, util: UtilityTable, j: int, k: int,
                        duplicate_effects: Optional[Pair] = None) -> Tuple[ConfoundedJoint, UtilityTable]:
    """
    Make cause k an exact copy of cause j.

    Copies iota[:, :, j] and the utility row of j into k, sets beta[k] = beta[j]
    and renormalises every beta column. With ``duplicate_effects=(a, b)`` the
    effect b is also made a copy of a under every (z, c).
    """
    m = len(joint.cause_space)
    if j == k or not (0 <= j < m and 0 <= k < m):
        raise ShapeError(f"need two distinct cause indices below {m}, got ({j}, {k})")
    iota = joint.iota.copy()
    beta = joint.beta.copy()
    values = util.values.copy()
    iota[:, :, k] = iota[:, :, j]
    beta[k] = beta[j]
    beta = beta / beta.sum(axis=0, keepdims=True)
    values[k] = values[j]
    if duplicate_effects is not None:
        a, b = duplicate_effects
        if a == b or not (0 <= a < len(joint.effect_space) and 0 <= b < len(joint.effect_space)):
            raise ShapeError(f"need two distinct effect indices, got ({a}, {b})")
        iota[b] = iota[a]
        iota = iota / iota.sum(axis=0, keepdims=True)
        values[:, b] = values[:, a]
    planted = ConfoundedJoint(cause_space=joint.cause_space, effect_space=joint.effect_space,
                              confounder_space=joint.confounder_space, iota=iota, beta=beta, gamma=joint.gamma)
    return planted, UtilityTable(cause_space=util.cause_space, effect_space=util.effect_space, values=values)


def _holds(joint: ConfoundedJoint, util: UtilityTable, relation: str, tol: float) -> bool:
    obs_cpt = distribution_service.observational_cpt(joint)
    int_cpt = distribution_service.interventional_cpt(joint)
    if relation == "pragmatic":
        return refines(equivalence_service.pragmatic_causal_coarsening(int_cpt, util, tol),
                       equivalence_service.observational_pragmatic_causal_coarsening(obs_cpt, util, tol))
    return (refines(equivalence_service.causal_coarsening(int_cpt, tol),
                    equivalence_service.observational_causal_coarsening(obs_cpt, tol))
            and refines(equivalence_service.effect_coarsening(int_cpt, tol),
                        equivalence_service.observational_effect_coarsening(obs_cpt, tol)))


def planted_refinement_probe(dims: Sequence[int], trials: int, seed: int = 0, relation: str = "pragmatic",
                             tol: Optional[float] = None) -> RefinementReport:
    """How often the interventional coarsening is a quotient of the observational one on planted ties."""
    if relation not in RELATIONS:
        raise ValueError(f"relation must be one of {RELATIONS}, got {relation!r}")
    m, n, w = (int(d) for d in dims)
    if m < 2 or (relation == "causal" and n < 2):
        raise ShapeError("planting a tie needs at least two values on each duplicated side")
    tol = resolve_tolerance(tol)
    holds = 0
    for trial in range(trials):
        rng = np.random.default_rng([seed, trial])
        joint = sample_joint(m, n, w, rng)
        util = uniform_utility(joint.cause_space, joint.effect_space, rng)
        j, k = (int(x) for x in rng.choice(m, size=2, replace=False))
        effects = tuple(int(x) for x in rng.choice(n, size=2, replace=False)) if relation == "causal" else None
        joint, util = plant_duplicate_tie(joint, util, j, k, effects)
        holds += _holds(joint, util, relation, tol)
    logger.info(f"Planted {relation} ties: refinement held in {holds} of {trials} trials")
    return RefinementReport(dims=(m, n, w), relation=relation, trials=trials, holds=holds, seed=seed)


def solve_gamma_tie(joint: ConfoundedJoint, util: UtilityTable, j: int, k: int,
                    gamma_b: Sequence[float]) -> List[ConfoundedJoint]:
    """
    Joints on the segment from joint.gamma to ``gamma_b`` where causes j and k
    have equal observational expected utility.

    The residual along gamma(t) = gamma + t * (gamma_b - gamma) is quadratic in t;
    every root strictly inside (0, 1) gives one joint.
    """
    matrix = distribution_service.constraint_matrix(joint, util, j, k)
    start = joint.gamma
    direction = np.asarray(gamma_b, dtype=float) - start
    if direction.shape != start.shape:
        raise ShapeError(f"gamma_b has shape {direction.shape}, expected {start.shape}")
    coefficients = [direction @ matrix @ direction,
                    start @ matrix @ direction + direction @ matrix @ start,
                    start @ matrix @ start]
    solutions = []
    for root in np.roots(coefficients):
        if abs(root.imag) > 1e-12 or not 0.0 < root.real < 1.0:
            continue
        gamma = start + root.real * direction
        solutions.append(ConfoundedJoint(
            cause_space=joint.cause_space,
            effect_space=joint.effect_space,
            confounder_space=joint.confounder_space,
            iota=joint.iota,
            beta=joint.beta,
            gamma=gamma / gamma.sum(),
        ))
    return solutions


def find_gamma_violation(seed: int = 0, max_tries: int = 10000,
                         delta: Optional[float] = None) -> Tuple[ConfoundedJoint, UtilityTable]:
    """
    Random search for a 2x2x2 joint whose two causes tie observationally in
    expected utility while their interventional expected utilities differ by
    more than 10 * delta.
    """
    delta = settings.prop2_delta if delta is None else delta
    for attempt in range(max_tries):
        rng = np.random.default_rng([seed, attempt])
        joint = sample_joint(2, 2, 2, rng)
        util = uniform_utility(joint.cause_space, joint.effect_space, rng)
        gamma_b = rng.exponential(size=2)
        for candidate in solve_gamma_tie(joint, util, 0, 1, gamma_b / gamma_b.sum()):
            if np.any(distribution_service.cause_marginal(candidate) <= 0):
                continue
            _, intv = _expected_utilities(candidate, util)
            if abs(intv[0] - intv[1]) > 10 * delta:
                logger.info(f"Found an observational tie that breaks under intervention after {attempt + 1} tries")
                return candidate, util
    raise SolverError(f"no observational tie with distinct interventional utilities in {max_tries} tries")
