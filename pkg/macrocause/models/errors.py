"""Error hierarchy shared by every macrocause module."""
from typing import Optional


class CoarseningError(ValueError):
    """Base class for all domain errors."""


class ShapeError(CoarseningError):
    """Array or value-space dimensions do not line up."""


class KindError(CoarseningError):
    """A CPT of the wrong kind (observational vs interventional) was supplied."""


class DegenerateClassError(CoarseningError):
    """A class of a partition carries zero probability mass."""


class ZeroMarginalError(CoarseningError):
    """A cause value has zero marginal probability where a conditional is needed."""

    def __init__(self, label: str, message: Optional[str] = None):
        self.label = label
        super().__init__(message or f"cause value {label!r} has zero marginal probability")


class CodingError(CoarseningError):
    """Effect labels cannot be turned into numbers for regression."""


class ClusterConfigError(CoarseningError):
    """Clustering configuration is inconsistent with the data."""


class CoverageError(CoarseningError):
    """Required (cause, effect) pairs are missing from the data."""

    def __init__(self, missing: list[tuple[str, str]]):
        self.missing = missing
        listed = ", ".join(f"({c}, {e})" for c, e in missing[:20])
        more = "" if len(missing) <= 20 else f" and {len(missing) - 20} more"
        super().__init__(f"unobserved (cause, effect) pairs and no utility table: {listed}{more}")


class StochasticityError(CoarseningError):
    """A CPT row does not sum to one."""


class InputError(CoarseningError):
    """Malformed input file or inconsistent records."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class SolverError(CoarseningError):
    """A linear or polynomial solve had no usable solution."""
