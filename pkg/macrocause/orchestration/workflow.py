"""LangGraph workflows for the observational-then-interventional procedures."""
from typing import Any, Optional

import logging
import numpy as np
from langgraph.graph import StateGraph, END

from macrocause.config.settings import resolve_tolerance
from macrocause.core.coarsen import class_weights, coarse_space, coarsen_cpt
from macrocause.core.partitions import identity_partition, lift_partition
from macrocause.models.errors import ShapeError
from macrocause.models.schemas import (
    ConfoundedJoint,
    PipelineResult,
    PipelineState,
    UtilityTable,
)
from macrocause.services.distribution_service import distribution_service
from macrocause.services.equivalence_service import equivalence_service

logger = logging.getLogger(__name__)


def _get(state: Any, key: str):
    # Handle both dict and object access
    if isinstance(state, dict):
        return state.get(key)
    return getattr(state, key, None)


def observe_joint(state: PipelineState) -> dict:
    """Compute both conditionals and the cause marginal of the joint."""
    joint = _get(state, "joint")
    return {
        "obs_cpt": distribution_service.observational_cpt(joint),
        "int_cpt": distribution_service.interventional_cpt(joint),
        "marginal": distribution_service.cause_marginal(joint),
    }


def observational_pragmatic_step(state: PipelineState) -> dict:
    partition = equivalence_service.observational_pragmatic_causal_coarsening(
        _get(state, "obs_cpt"), _get(state, "util"), _get(state, "tol"))
    logger.info(f"Observational pragmatic coarsening: {partition.n_classes} classes")
    return {"observational_partition": partition}


def observational_causal_step(state: PipelineState) -> dict:
    partition = equivalence_service.observational_causal_coarsening(_get(state, "obs_cpt"), _get(state, "tol"))
    logger.info(f"Observational causal coarsening: {partition.n_classes} classes")
    return {"observational_partition": partition}


def intervene_on_expected_utility(state: PipelineState) -> dict:
    """Interventional EU of each coarse value as a marginal-weighted mixture of its members."""
    int_cpt, util = _get(state, "int_cpt"), _get(state, "util")
    marginal, coarse = _get(state, "marginal"), _get(state, "observational_partition")
    fine_eu = equivalence_service.expected_utilities(int_cpt, util).values
    coarse_eu = np.array([
        class_weights(marginal, members, int_cpt.cause_space) @ fine_eu[list(members)]
        for members in coarse.classes
    ])
    return {"coarse_values": coarse_eu}


def split_maximizers(state: PipelineState) -> dict:
    """Maximizer classes against the rest, lifted back onto the fine causes."""
    coarse, coarse_eu = _get(state, "observational_partition"), _get(state, "coarse_values")
    over_classes = equivalence_service.maximizer_partition(coarse_space(coarse), coarse_eu, _get(state, "tol"))
    cause_partition = lift_partition(over_classes, coarse)
    effect_partition = equivalence_service.pragmatic_effect_coarsening(_get(state, "util"), _get(state, "tol"))
    logger.info(f"Pragmatic pipeline: {cause_partition.n_classes} cause classes, "
                f"{effect_partition.n_classes} effect classes")
    return {"cause_partition": cause_partition, "effect_partition": effect_partition}


def intervene_on_coarse_values(state: PipelineState) -> dict:
    """Merge coarse values whose mixture interventional rows agree, then lift back."""
    int_cpt, coarse = _get(state, "int_cpt"), _get(state, "observational_partition")
    mixed = coarsen_cpt(int_cpt, coarse, identity_partition(int_cpt.effect_space), _get(state, "marginal"))
    over_classes = equivalence_service.causal_coarsening(mixed, _get(state, "tol"))
    cause_partition = lift_partition(over_classes, coarse)
    effect_partition = equivalence_service.effect_coarsening(int_cpt, _get(state, "tol"))
    logger.info(f"Causal pipeline: {cause_partition.n_classes} cause classes, "
                f"{effect_partition.n_classes} effect classes")
    return {"cause_partition": cause_partition, "effect_partition": effect_partition}


def coarsen_interventional(state: PipelineState) -> dict:
    coarse_cpt = coarsen_cpt(_get(state, "int_cpt"), _get(state, "cause_partition"),
                             _get(state, "effect_partition"), _get(state, "marginal"))
    return {"coarse_cpt": coarse_cpt}


def create_pragmatic_workflow() -> StateGraph:
    """
    Create the LangGraph workflow for the pragmatic procedure.

    Workflow:
    1. Observe the joint
    2. Coarsen causes by observational expected utility
    3. Intervene on each coarse value
    4. Split maximizers from the rest and coarsen effects by utility
    5. Build the coarse interventional CPT
    """
    workflow = StateGraph(PipelineState)

    workflow.add_node("observe", observe_joint)
    workflow.add_node("observational_pragmatic", observational_pragmatic_step)
    workflow.add_node("intervene", intervene_on_expected_utility)
    workflow.add_node("split_maximizers", split_maximizers)
    workflow.add_node("coarse_cpt", coarsen_interventional)

    workflow.set_entry_point("observe")
    workflow.add_edge("observe", "observational_pragmatic")
    workflow.add_edge("observational_pragmatic", "intervene")
    workflow.add_edge("intervene", "split_maximizers")
    workflow.add_edge("split_maximizers", "coarse_cpt")
    workflow.add_edge("coarse_cpt", END)

    return workflow.compile()


def create_causal_workflow() -> StateGraph:
    """
    Create the LangGraph workflow for the causal procedure.

    Workflow:
    1. Observe the joint
    2. Coarsen causes by observational rows
    3. Intervene on each coarse value and merge equal rows
    4. Build the coarse interventional CPT
    """
    workflow = StateGraph(PipelineState)

    workflow.add_node("observe", observe_joint)
    workflow.add_node("observational_causal", observational_causal_step)
    workflow.add_node("intervene", intervene_on_coarse_values)
    workflow.add_node("coarse_cpt", coarsen_interventional)

    workflow.set_entry_point("observe")
    workflow.add_edge("observe", "observational_causal")
    workflow.add_edge("observational_causal", "intervene")
    workflow.add_edge("intervene", "coarse_cpt")
    workflow.add_edge("coarse_cpt", END)

    return workflow.compile()


# Create compiled workflows
pragmatic_workflow = create_pragmatic_workflow()
causal_workflow = create_causal_workflow()


def _to_result(final_state: Any, with_eu: bool) -> PipelineResult:
    return PipelineResult(
        cause_partition=_get(final_state, "cause_partition"),
        effect_partition=_get(final_state, "effect_partition"),
        coarse_cpt=_get(final_state, "coarse_cpt"),
        observational_partition=_get(final_state, "observational_partition"),
        coarse_eu=_get(final_state, "coarse_values") if with_eu else None,
    )


def pragmatic_pipeline(joint: ConfoundedJoint, util: UtilityTable, tol: Optional[float] = None) -> PipelineResult:
    """Observational pragmatic coarsening first, then interventions on the coarse values.

    ``result.as_tuple()`` gives (cause partition, effect partition, coarse CPT).
    """
    if util.cause_space != joint.cause_space or util.effect_space != joint.effect_space:
        raise ShapeError("utility table spaces do not match the joint")
    initial_state = PipelineState(joint=joint, util=util, tol=resolve_tolerance(tol))
    logger.info(f"Starting pragmatic pipeline on a joint with dims {joint.dims}")
    final_state = pragmatic_workflow.invoke(initial_state)
    return _to_result(final_state, with_eu=True)


def causal_pipeline(joint: ConfoundedJoint, tol: Optional[float] = None) -> PipelineResult:
    """Observational causal coarsening first, then interventions on the coarse values."""
    initial_state = PipelineState(joint=joint, tol=resolve_tolerance(tol))
    logger.info(f"Starting causal pipeline on a joint with dims {joint.dims}")
    final_state = causal_workflow.invoke(initial_state)
    return _to_result(final_state, with_eu=False)
