"""Pydantic models for the domain types shared by every module."""
from enum import Enum
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, Field, field_validator, model_validator

from macrocause.models.errors import InputError, ShapeError

# Joins member labels of a class into a macro-value label, e.g. "Marlboro∨Other".
MACRO_JOIN = "∨"

ROW_SUM_TOL = 1e-9
PROB_SLACK = 1e-12


class CptKind(str, Enum):
    """Whether a conditional was obtained by observation or by intervention."""
    OBSERVATIONAL = "observational"
    INTERVENTIONAL = "interventional"


class ClusterMethod(str, Enum):
    """Clustering algorithms available to the sample-based learners."""
    TOLERANCE_LINK = "tol"
    KMEANS = "kmeans"


class EffectCoding(str, Enum):
    """How discrete effect labels become regression targets."""
    NUMERIC = "numeric"
    ENUMERATION = "enumeration"
    ONEHOT = "onehot"


class OutputFormat(str, Enum):
    """Report formats."""
    TEXT = "text"
    JSON = "json"
    CSV = "csv"


class Relation(str, Enum):
    """The equivalence relations exposed by the ``exact`` command."""
    CAUSAL = "c"
    EFFECT = "e"
    OBSERVATIONAL_CAUSAL = "oc"
    OBSERVATIONAL_EFFECT = "oe"
    PRAGMATIC_CAUSAL = "pc"
    PRAGMATIC_EFFECT = "pe"
    OBSERVATIONAL_PRAGMATIC_CAUSAL = "opc"

    @property
    def on_causes(self) -> bool:
        """Whether the relation partitions cause values."""
        return self not in (Relation.EFFECT, Relation.OBSERVATIONAL_EFFECT, Relation.PRAGMATIC_EFFECT)


def _frozen_array(value: Any, dtype=float) -> np.ndarray:
    arr = np.array(value, dtype=dtype, copy=True)
    arr.flags.writeable = False
    return arr


def _is_number(text: str) -> bool:
    try:
        float(text)
    except (TypeError, ValueError):
        return False
    return True


class ValueSpace(BaseModel):
    """Ordered list of distinct value labels; a label's position is its id."""
    labels: Tuple[str, ...]

    class Config:
        frozen = True

    @field_validator("labels", mode="before")
    @classmethod
    def _coerce_labels(cls, value):
        return tuple(str(v) for v in value)

    @field_validator("labels")
    @classmethod
    def _check_labels(cls, value):
        if not value:
            raise ValueError("a value space needs at least one label")
        if len(set(value)) != len(value):
            raise ValueError(f"value labels must be distinct: {list(value)}")
        return value

    @classmethod
    def from_labels(cls, labels: Iterable[Any]) -> "ValueSpace":
        return cls(labels=tuple(labels))

    def __len__(self) -> int:
        return len(self.labels)

    def index(self, label: Any) -> int:
        try:
            return self.labels.index(str(label))
        except ValueError:
            raise ShapeError(f"{label!r} is not a value of this space") from None

    def positions(self) -> Dict[str, int]:
        return {label: i for i, label in enumerate(self.labels)}

    def restrict(self, labels: Iterable[str]) -> "ValueSpace":
        """Sub-space holding ``labels`` in this space's order."""
        keep = set(str(label) for label in labels)
        return ValueSpace(labels=tuple(label for label in self.labels if label in keep))


class Partition(BaseModel):
    """Quotient of a value space into disjoint, exhaustive classes.

    Classes hold sorted indices and are ordered by their smallest member.
    """
    space: ValueSpace
    classes: Tuple[Tuple[int, ...], ...]

    class Config:
        frozen = True

    @model_validator(mode="after")
    def _check_structure(self):
        seen: set = set()
        previous_min = -1
        for cls_ in self.classes:
            if not cls_:
                raise ValueError("partition classes must be non-empty")
            if list(cls_) != sorted(cls_):
                raise ValueError(f"class {cls_} is not sorted")
            if cls_[0] <= previous_min:
                raise ValueError("classes must be ordered by smallest member")
            previous_min = cls_[0]
            overlap = seen.intersection(cls_)
            if overlap:
                raise ValueError(f"classes overlap on indices {sorted(overlap)}")
            seen.update(cls_)
        if seen != set(range(len(self.space))):
            raise ValueError("partition classes must cover every value exactly once")
        return self

    @classmethod
    def canonical(cls, space: ValueSpace, classes: Iterable[Iterable[int]]) -> "Partition":
        """Build a partition from classes in any order."""
        ordered = sorted((tuple(sorted(int(i) for i in c)) for c in classes if c), key=lambda c: c[0])
        return cls(space=space, classes=tuple(ordered))

    @property
    def n_classes(self) -> int:
        return len(self.classes)

    def assignment(self) -> np.ndarray:
        """Class number of every value index."""
        out = np.empty(len(self.space), dtype=int)
        for k, cls_ in enumerate(self.classes):
            out[list(cls_)] = k
        return out

    def as_labels(self) -> List[List[str]]:
        return [[self.space.labels[i] for i in cls_] for cls_ in self.classes]

    def macro_labels(self) -> List[str]:
        return [MACRO_JOIN.join(members) for members in self.as_labels()]

    def is_identity(self) -> bool:
        return self.n_classes == len(self.space)


class Cpt(BaseModel):
    """Row-stochastic table p(effect | cause)."""
    cause_space: ValueSpace
    effect_space: ValueSpace
    rows: np.ndarray
    kind: CptKind = CptKind.OBSERVATIONAL

    class Config:
        frozen = True
        arbitrary_types_allowed = True

    @field_validator("rows", mode="before")
    @classmethod
    def _coerce_rows(cls, value):
        arr = np.array(value, dtype=float, copy=True)
        # float round-off from sums of probabilities
        arr[(arr < 0) & (arr > -PROB_SLACK)] = 0.0
        arr[(arr > 1) & (arr < 1 + PROB_SLACK)] = 1.0
        arr.flags.writeable = False
        return arr

    @model_validator(mode="after")
    def _check_rows(self):
        shape = (len(self.cause_space), len(self.effect_space))
        if self.rows.shape != shape:
            raise ValueError(f"CPT has shape {self.rows.shape}, expected {shape}")
        if not np.all(np.isfinite(self.rows)):
            raise ValueError("CPT entries must be finite")
        if np.any(self.rows < 0) or np.any(self.rows > 1):
            raise ValueError("CPT entries must lie in [0, 1]")
        sums = self.rows.sum(axis=1)
        bad = np.flatnonzero(np.abs(sums - 1.0) > ROW_SUM_TOL)
        if bad.size:
            label = self.cause_space.labels[bad[0]]
            raise ValueError(f"CPT row {label!r} sums to {sums[bad[0]]!r}, not 1")
        return self

    @property
    def n_causes(self) -> int:
        return len(self.cause_space)

    @property
    def n_effects(self) -> int:
        return len(self.effect_space)

    def row(self, cause: str) -> np.ndarray:
        return self.rows[self.cause_space.index(cause)]


class UtilityTable(BaseModel):
    """Utilities u(c, e) over the cause × effect product space."""
    cause_space: ValueSpace
    effect_space: ValueSpace
    values: np.ndarray

    class Config:
        frozen = True
        arbitrary_types_allowed = True

    @field_validator("values", mode="before")
    @classmethod
    def _coerce_values(cls, value):
        return _frozen_array(value)

    @model_validator(mode="after")
    def _check_values(self):
        shape = (len(self.cause_space), len(self.effect_space))
        if self.values.shape != shape:
            raise ValueError(f"utility table has shape {self.values.shape}, expected {shape}")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("utilities must be finite")
        return self

    def lookup(self, cause: str, effect: str) -> float:
        return float(self.values[self.cause_space.index(cause), self.effect_space.index(effect)])

    def submatrix(self, cause_labels: Iterable[str], effect_labels: Iterable[str]) -> np.ndarray:
        """Utilities for the given labels, in their order; every label must be in the table."""
        cause_labels, effect_labels = [str(c) for c in cause_labels], [str(e) for e in effect_labels]
        causes, effects = self.cause_space.positions(), self.effect_space.positions()
        missing = [f"cause {c!r}" for c in cause_labels if c not in causes]
        missing += [f"effect {e!r}" for e in effect_labels if e not in effects]
        if missing:
            raise ShapeError(f"utility table has no entries for {', '.join(missing)}")
        return self.values[np.ix_([causes[c] for c in cause_labels], [effects[e] for e in effect_labels])].copy()


def _order_observed(observed: Sequence[str]) -> List[str]:
    distinct = list(dict.fromkeys(observed))
    if all(_is_number(label) for label in distinct):
        return sorted(distinct, key=float)
    return distinct


def _encode_labels(values: Sequence[Any], space: Optional[ValueSpace], what: str):
    labels = [str(v) for v in values]
    if space is None:
        space = ValueSpace(labels=_order_observed(labels))
    else:
        unknown = sorted(set(labels) - set(space.labels))
        if unknown:
            raise InputError(f"{what} labels {unknown} are not in the supplied value space")
        space = space.restrict(labels)
    lookup = space.positions()
    return space, np.array([lookup[label] for label in labels], dtype=int), None


def _encode_vectors(values: Any, prefix: str):
    arr = np.asarray(values, dtype=float)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    if arr.ndim != 2:
        raise InputError(f"{prefix} vectors must form a 2-D array")
    if not np.all(np.isfinite(arr)):
        raise InputError(f"{prefix} vectors must be finite")
    distinct, inverse = np.unique(arr, axis=0, return_inverse=True)
    space = ValueSpace(labels=tuple(f"{prefix}{i}" for i in range(len(distinct))))
    return space, np.asarray(inverse).reshape(-1).astype(int), distinct


def _looks_like_vector(value: Any) -> bool:
    return isinstance(value, (list, tuple, np.ndarray))


class SampleSet(BaseModel):
    """Observed (cause, effect) pairs, optionally with per-pair utilities.

    Values are stored as indices into the observed value spaces. A side whose
    entries are real vectors keeps the distinct vectors in ``*_vectors`` and
    labels them ``c0, c1, ...`` / ``e0, e1, ...``.
    """
    cause_space: ValueSpace
    effect_space: ValueSpace
    cause_index: np.ndarray
    effect_index: np.ndarray
    utilities: Optional[np.ndarray] = None
    cause_vectors: Optional[np.ndarray] = None
    effect_vectors: Optional[np.ndarray] = None

    class Config:
        frozen = True
        arbitrary_types_allowed = True

    @field_validator("cause_index", "effect_index", mode="before")
    @classmethod
    def _coerce_index(cls, value):
        return _frozen_array(value, dtype=int)

    @field_validator("utilities", "cause_vectors", "effect_vectors", mode="before")
    @classmethod
    def _coerce_optional(cls, value):
        return None if value is None else _frozen_array(value)

    @model_validator(mode="after")
    def _check_columns(self):
        n = self.cause_index.shape[0]
        if n == 0:
            raise ValueError("a sample set needs at least one record")
        if self.cause_index.shape != (n,) or self.effect_index.shape != (n,):
            raise ValueError("cause and effect columns must have one entry per record")
        for name, index, space in (("cause", self.cause_index, self.cause_space),
                                   ("effect", self.effect_index, self.effect_space)):
            if index.min() < 0 or index.max() >= len(space):
                raise ValueError(f"{name} index out of range")
        if self.utilities is not None:
            if self.utilities.shape != (n,):
                raise ValueError("utilities must be given for every record or for none")
            if not np.all(np.isfinite(self.utilities)):
                raise ValueError("utilities must be finite")
        for name, vectors, space in (("cause", self.cause_vectors, self.cause_space),
                                     ("effect", self.effect_vectors, self.effect_space)):
            if vectors is not None and (vectors.ndim != 2 or vectors.shape[0] != len(space)):
                raise ValueError(f"{name} vectors must have one row per distinct value")
        return self

    @classmethod
    def from_columns(
        cls,
        causes: Any,
        effects: Any,
        utilities: Optional[Sequence[float]] = None,
        cause_space: Optional[ValueSpace] = None,
        effect_space: Optional[ValueSpace] = None,
    ) -> "SampleSet":
        """Build from two columns; a 2-D numeric array column means vector mode."""
        if isinstance(causes, np.ndarray) and causes.ndim == 2:
            c_space, c_index, c_vectors = _encode_vectors(causes, "c")
        else:
            c_space, c_index, c_vectors = _encode_labels(list(causes), cause_space, "cause")
        if isinstance(effects, np.ndarray) and effects.ndim == 2:
            e_space, e_index, e_vectors = _encode_vectors(effects, "e")
        else:
            e_space, e_index, e_vectors = _encode_labels(list(effects), effect_space, "effect")
        if len(c_index) != len(e_index):
            raise InputError("cause and effect columns differ in length")
        return cls(
            cause_space=c_space,
            effect_space=e_space,
            cause_index=c_index,
            effect_index=e_index,
            utilities=None if utilities is None else np.asarray(utilities, dtype=float),
            cause_vectors=c_vectors,
            effect_vectors=e_vectors,
        )

    @classmethod
    def from_records(
        cls,
        records: Iterable[Sequence[Any]],
        cause_space: Optional[ValueSpace] = None,
        effect_space: Optional[ValueSpace] = None,
    ) -> "SampleSet":
        """Build from ``(c, e)`` or ``(c, e, u)`` tuples."""
        records = list(records)
        if not records:
            raise InputError("no records")
        widths = {len(r) for r in records}
        if widths not in ({2}, {3}):
            raise InputError("utility must be present for all records or none")
        causes = [r[0] for r in records]
        effects = [r[1] for r in records]
        columns = []
        for what, column in (("cause", causes), ("effect", effects)):
            kinds = {_looks_like_vector(v) for v in column}
            if len(kinds) > 1:
                raise InputError(f"{what} entries mix labels and vectors")
            if kinds == {True}:
                dims = {len(v) for v in column}
                if len(dims) > 1:
                    raise InputError(f"{what} vectors have differing dimensions {sorted(dims)}")
                columns.append(np.asarray(column, dtype=float))
            else:
                columns.append(column)
        utilities = [float(r[2]) for r in records] if widths == {3} else None
        return cls.from_columns(columns[0], columns[1], utilities, cause_space, effect_space)

    @property
    def size(self) -> int:
        return int(self.cause_index.shape[0])

    @property
    def has_utilities(self) -> bool:
        return self.utilities is not None

    @property
    def continuous_causes(self) -> bool:
        return self.cause_vectors is not None

    @property
    def continuous_effects(self) -> bool:
        return self.effect_vectors is not None

    def cause_points(self) -> np.ndarray:
        """Per-record cause vectors (vector mode only)."""
        return self.cause_vectors[self.cause_index]

    def effect_points(self) -> np.ndarray:
        """Per-record effect vectors (vector mode only)."""
        return self.effect_vectors[self.effect_index]

    def records(self) -> List[Tuple[Any, ...]]:
        out = []
        for row in range(self.size):
            c = (self.cause_vectors[self.cause_index[row]].tolist() if self.continuous_causes
                 else self.cause_space.labels[self.cause_index[row]])
            e = (self.effect_vectors[self.effect_index[row]].tolist() if self.continuous_effects
                 else self.effect_space.labels[self.effect_index[row]])
            if self.utilities is None:
                out.append((c, e))
            else:
                out.append((c, e, float(self.utilities[row])))
        return out

    def counts(self) -> np.ndarray:
        """Contingency table of (cause, effect) record counts."""
        table = np.zeros((len(self.cause_space), len(self.effect_space)), dtype=float)
        np.add.at(table, (self.cause_index, self.effect_index), 1.0)
        return table


class ConfoundedJoint(BaseModel):
    """Exact joint over (C, E, Z) factored as p(e|z,c) p(c|z) p(z).

    iota[i, l, j] = p(e_i | z_l, c_j); beta[j, l] = p(c_j | z_l); gamma[l] = p(z_l).
    """
    cause_space: ValueSpace
    effect_space: ValueSpace
    confounder_space: ValueSpace
    iota: np.ndarray
    beta: np.ndarray
    gamma: np.ndarray

    class Config:
        frozen = True
        arbitrary_types_allowed = True

    @field_validator("iota", "beta", "gamma", mode="before")
    @classmethod
    def _coerce_arrays(cls, value):
        return _frozen_array(value)

    @model_validator(mode="after")
    def _check_simplex(self):
        m, n, w = len(self.cause_space), len(self.effect_space), len(self.confounder_space)
        for name, arr, shape in (("iota", self.iota, (n, w, m)), ("beta", self.beta, (m, w)),
                                 ("gamma", self.gamma, (w,))):
            if arr.shape != shape:
                raise ValueError(f"{name} has shape {arr.shape}, expected {shape}")
            if not np.all(np.isfinite(arr)) or np.any(arr < 0):
                raise ValueError(f"{name} entries must be finite and non-negative")
        if np.any(np.abs(self.iota.sum(axis=0) - 1.0) > ROW_SUM_TOL):
            raise ValueError("iota must sum to 1 over effects for every (z, c)")
        if np.any(np.abs(self.beta.sum(axis=0) - 1.0) > ROW_SUM_TOL):
            raise ValueError("beta must sum to 1 over causes for every z")
        if abs(self.gamma.sum() - 1.0) > ROW_SUM_TOL:
            raise ValueError("gamma must sum to 1")
        return self

    @property
    def dims(self) -> Tuple[int, int, int]:
        return len(self.cause_space), len(self.effect_space), len(self.confounder_space)


class ExpectedUtilityProfile(BaseModel):
    """Expected utility of every cause value; eta is the max for interventional profiles."""
    space: ValueSpace
    values: np.ndarray
    kind: CptKind
    eta: Optional[float] = None

    class Config:
        frozen = True
        arbitrary_types_allowed = True

    @field_validator("values", mode="before")
    @classmethod
    def _coerce_values(cls, value):
        return _frozen_array(value)

    @model_validator(mode="after")
    def _check_eta(self):
        if self.values.shape != (len(self.space),):
            raise ValueError("one expected utility per cause value is required")
        if self.kind is CptKind.INTERVENTIONAL:
            if self.eta is None or abs(self.eta - float(self.values.max())) > 1e-12:
                raise ValueError("eta must equal the maximum interventional expected utility")
        return self

    def maximizers(self, tol: float) -> List[int]:
        top = float(self.values.max())
        return [i for i, v in enumerate(self.values) if v >= top - tol]

    def as_dict(self) -> Dict[str, float]:
        return {label: float(v) for label, v in zip(self.space.labels, self.values)}


class ClusterConfig(BaseModel):
    """Clustering setup for the sample-based learners."""
    method: ClusterMethod = ClusterMethod.TOLERANCE_LINK
    cluster_tol: Optional[float] = Field(None, description="merge threshold for tolerance-link")
    k_clusters: Optional[int] = Field(None, description="cluster count for kmeans")
    knn_k: int = Field(5, description="neighbour rank used by the kNN density feature")
    seed: int = 0
    effect_coding: EffectCoding = EffectCoding.NUMERIC
    effect_codes: Optional[Dict[str, float]] = None
    smoothing_alpha: float = 0.0

    class Config:
        frozen = True

    @model_validator(mode="after")
    def _check_method_fields(self):
        if self.method is ClusterMethod.TOLERANCE_LINK:
            if self.cluster_tol is None or self.cluster_tol < 0:
                raise ValueError("tolerance-link clustering needs a non-negative cluster_tol")
        elif self.k_clusters is None or self.k_clusters < 1:
            raise ValueError("kmeans clustering needs k_clusters >= 1")
        if self.knn_k < 1:
            raise ValueError("knn_k must be at least 1")
        if self.smoothing_alpha < 0:
            raise ValueError("smoothing_alpha must be non-negative")
        return self

    @classmethod
    def tolerance(cls, cluster_tol: float, **kwargs) -> "ClusterConfig":
        return cls(method=ClusterMethod.TOLERANCE_LINK, cluster_tol=cluster_tol, **kwargs)

    @classmethod
    def kmeans(cls, k_clusters: int, **kwargs) -> "ClusterConfig":
        return cls(method=ClusterMethod.KMEANS, k_clusters=k_clusters, **kwargs)


class CoarseningResult(BaseModel):
    """Output of the sample-based learners."""
    cause_partition: Partition
    effect_partition: Partition
    coarse_cpt: Cpt
    cause_statistic: Dict[str, Any] = Field(default_factory=dict, description="f(c) per cause value")
    effect_features: Dict[str, Any] = Field(default_factory=dict, description="g(e) per effect value")

    class Config:
        frozen = True
        arbitrary_types_allowed = True

    @model_validator(mode="after")
    def _check_cover(self):
        if self.coarse_cpt.n_causes != self.cause_partition.n_classes:
            raise ValueError("coarse CPT rows must match the cause classes")
        if self.coarse_cpt.n_effects != self.effect_partition.n_classes:
            raise ValueError("coarse CPT columns must match the effect classes")
        return self


class PipelineResult(BaseModel):
    """Result of the observational-then-interventional procedures."""
    cause_partition: Partition
    effect_partition: Partition
    coarse_cpt: Cpt
    observational_partition: Partition
    coarse_eu: Optional[np.ndarray] = None

    class Config:
        frozen = True
        arbitrary_types_allowed = True

    def as_tuple(self) -> Tuple[Partition, Partition, Cpt]:
        return self.cause_partition, self.effect_partition, self.coarse_cpt


class PipelineState(BaseModel):
    """State object for the LangGraph coarsening pipelines."""
    # Input
    joint: ConfoundedJoint
    util: Optional[UtilityTable] = None
    tol: float = 1e-9

    # Intermediate data
    obs_cpt: Optional[Cpt] = None
    int_cpt: Optional[Cpt] = None
    marginal: Optional[np.ndarray] = None
    observational_partition: Optional[Partition] = None
    coarse_values: Optional[np.ndarray] = None

    # Final output
    cause_partition: Optional[Partition] = None
    effect_partition: Optional[Partition] = None
    coarse_cpt: Optional[Cpt] = None

    class Config:
        arbitrary_types_allowed = True


APPROXIMATION_NOTE = (
    "approximate observational pragmatic equivalence is operationalised as "
    "|EU_obs(c_j) - EU_obs(c_k)| < eps"
)


class Prop2Report(BaseModel):
    """eps-relaxation curve of the observational-to-interventional quotient check."""
    dims: Tuple[int, int, int]
    trials: int
    pairs_per_trial: int
    seed: int
    delta: float
    eps_grid: List[float]
    flagged: List[int]
    violations: List[int]
    rates: List[float]
    conditional_rates: List[float]
    note: str = APPROXIMATION_NOTE

    @model_validator(mode="after")
    def _check_counts(self):
        cap = self.trials * self.pairs_per_trial
        lengths = {len(self.eps_grid), len(self.flagged), len(self.violations), len(self.rates)}
        if len(lengths) != 1:
            raise ValueError("one count per eps value is required")
        for flagged, violated in zip(self.flagged, self.violations):
            if not 0 <= violated <= flagged <= cap:
                raise ValueError("counts must satisfy 0 <= violations <= flagged <= trials x pairs")
        if any(not 0.0 <= r <= 1.0 for r in self.rates + self.conditional_rates):
            raise ValueError("rates must lie in [0, 1]")
        return self

    def to_csv(self) -> str:
        lines = ["eps,flagged,violations,rate"]
        for eps, flagged, violated, rate in zip(self.eps_grid, self.flagged, self.violations, self.rates):
            lines.append(f"{eps!r},{flagged},{violated},{rate!r}")
        return "\n".join(lines) + "\n"


class RefinementReport(BaseModel):
    """How often the interventional coarsening was a quotient of the observational one."""
    dims: Tuple[int, int, int]
    relation: str
    trials: int
    holds: int
    seed: int

    @property
    def rate(self) -> float:
        return self.holds / self.trials if self.trials else 1.0


class CoarseningReport(BaseModel):
    """Format-independent report document rendered by the report service."""
    title: str
    cause_partition: Optional[List[List[str]]] = None
    effect_partition: Optional[List[List[str]]] = None
    coarse_cpt: Optional[Dict[str, Any]] = None
    eu_profile: Optional[Dict[str, Any]] = None
    checks: List[Dict[str, Any]] = Field(default_factory=list)
    notes: List[str] = Field(default_factory=list)


class RunConfig(BaseModel):
    """Settings of one CLI invocation."""
    tolerance: float = 1e-9
    method: ClusterMethod = ClusterMethod.TOLERANCE_LINK
    cluster_tol: Optional[float] = 0.05
    k_clusters: Optional[int] = None
    knn_k: int = 5
    seed: int = 0
    n_samples: int = 10000
    smoothing_alpha: float = 0.0
    output_format: OutputFormat = OutputFormat.TEXT

    @model_validator(mode="after")
    def _check_positive(self):
        if self.tolerance <= 0:
            raise ValueError("tolerance must be positive")
        if self.knn_k < 1 or self.n_samples < 1:
            raise ValueError("knn_k and the sample count must be positive")
        if self.k_clusters is not None and self.k_clusters < 1:
            raise ValueError("k_clusters must be positive")
        if self.cluster_tol is not None and self.cluster_tol < 0:
            raise ValueError("cluster_tol must be non-negative")
        if self.smoothing_alpha < 0:
            raise ValueError("smoothing_alpha must be non-negative")
        return self

    def cluster_config(self, **overrides) -> ClusterConfig:
        fields = dict(method=self.method, knn_k=self.knn_k, seed=self.seed,
                      smoothing_alpha=self.smoothing_alpha)
        if self.method is ClusterMethod.TOLERANCE_LINK:
            fields["cluster_tol"] = self.cluster_tol
        else:
            fields["k_clusters"] = self.k_clusters
        fields.update(overrides)
        return ClusterConfig(**fields)
