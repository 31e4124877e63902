"""Models package."""
from .errors import (
    CoarseningError,
    ShapeError,
    KindError,
    DegenerateClassError,
    ZeroMarginalError,
    CodingError,
    ClusterConfigError,
    CoverageError,
    StochasticityError,
    InputError,
    SolverError,
)
from .schemas import (
    MACRO_JOIN,
    CptKind,
    ClusterMethod,
    EffectCoding,
    OutputFormat,
    Relation,
    ValueSpace,
    Partition,
    Cpt,
    UtilityTable,
    SampleSet,
    ConfoundedJoint,
    ExpectedUtilityProfile,
    ClusterConfig,
    CoarseningResult,
    PipelineResult,
    PipelineState,
    Prop2Report,
    RefinementReport,
    CoarseningReport,
    RunConfig,
)

__all__ = [
    "CoarseningError",
    "ShapeError",
    "KindError",
    "DegenerateClassError",
    "ZeroMarginalError",
    "CodingError",
    "ClusterConfigError",
    "CoverageError",
    "StochasticityError",
    "InputError",
    "SolverError",
    "MACRO_JOIN",
    "CptKind",
    "ClusterMethod",
    "EffectCoding",
    "OutputFormat",
    "Relation",
    "ValueSpace",
    "Partition",
    "Cpt",
    "UtilityTable",
    "SampleSet",
    "ConfoundedJoint",
    "ExpectedUtilityProfile",
    "ClusterConfig",
    "CoarseningResult",
    "PipelineResult",
    "PipelineState",
    "Prop2Report",
    "RefinementReport",
    "CoarseningReport",
    "RunConfig",
]
