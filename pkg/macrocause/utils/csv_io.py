"""CSV readers and writers for sample files and CPT / utility matrices."""
from pathlib import Path
from typing import List, Union

import csv
import logging
import numpy as np

from macrocause.models.errors import InputError, StochasticityError
from macrocause.models.schemas import ROW_SUM_TOL, Cpt, CptKind, SampleSet, UtilityTable, ValueSpace

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

# CPT rows further than this from 1 are rejected instead of renormalised.
RENORMALISE_TOL = 1e-6

_OPENERS = ("[", "(")
_CLOSERS = ("]", ")")


def _rejoin_intervals(fields: List[str]) -> List[str]:
    """Glue back interval labels such as [70,90] that an unquoted comma split apart."""
    out: List[str] = []
    pending: List[str] = []
    for field in fields:
        if pending:
            pending.append(field)
            if field.endswith(_CLOSERS):
                out.append(",".join(pending))
                pending = []
        elif field.startswith(_OPENERS) and not field.endswith(_CLOSERS):
            pending = [field]
        else:
            out.append(field)
    return out + pending


def _float(text: str, line: int, what: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise InputError(f"{what} {text!r} is not a number", line=line) from None


def _read_rows(path: PathLike):
    with open(path, newline="", encoding="utf-8") as handle:
        reader = csv.reader(handle)
        for fields in reader:
            if fields and any(f.strip() for f in fields):
                yield reader.line_num, [f.strip() for f in fields]


def parse_samples_csv(path: PathLike) -> SampleSet:
    """
    Read a sample file with header ``c,e`` or ``c,e,u``.

    Vector records use ``c_1..c_d,e_1..e_k`` headers (optionally followed by ``u``).
    """
    rows = _read_rows(path)
    try:
        _, header = next(rows)
    except StopIteration:
        raise InputError(f"{path} is empty") from None
    with_utility = header[-1] == "u"
    names = header[:-1] if with_utility else header
    vector_mode = names != ["c", "e"]
    if vector_mode:
        cause_cols = [i for i, name in enumerate(names) if name.startswith("c_")]
        effect_cols = [i for i, name in enumerate(names) if name.startswith("e_")]
        if not cause_cols or not effect_cols or len(cause_cols) + len(effect_cols) != len(names):
            raise InputError(f"unrecognised header {header}", line=1)

    causes, effects, utilities = [], [], []
    for line, fields in rows:
        if not vector_mode:
            fields = _rejoin_intervals(fields)
        if len(fields) != len(header):
            raise InputError(f"expected {len(header)} fields, found {len(fields)}", line=line)
        if vector_mode:
            causes.append([_float(fields[i], line, "cause coordinate") for i in cause_cols])
            effects.append([_float(fields[i], line, "effect coordinate") for i in effect_cols])
        else:
            causes.append(fields[0])
            effects.append(fields[1])
        if with_utility:
            utilities.append(_float(fields[-1], line, "utility"))
    if not causes:
        raise InputError(f"{path} has no records")

    if vector_mode:
        data = SampleSet.from_columns(np.asarray(causes), np.asarray(effects), utilities or None)
    else:
        data = SampleSet.from_columns(causes, effects, utilities or None)
    logger.info(f"Read {data.size} records from {path}")
    return data


def parse_matrix_csv(path: PathLike, kind: str = "cpt",
                     cpt_kind: CptKind = CptKind.OBSERVATIONAL) -> Union[Cpt, UtilityTable]:
    """
    Read a matrix whose first row holds effect labels and first column cause labels.

    CPT rows within 1e-6 of summing to 1 are renormalised; others are rejected.
    """
    if kind not in ("cpt", "utility"):
        raise InputError(f"matrix kind must be 'cpt' or 'utility', got {kind!r}")
    rows = _read_rows(path)
    try:
        _, header = next(rows)
    except StopIteration:
        raise InputError(f"{path} is empty") from None
    header = _rejoin_intervals(header)
    effects = header[1:]
    causes, values = [], []
    for line, fields in rows:
        fields = _rejoin_intervals(fields)
        if len(fields) != len(header):
            raise InputError(f"expected {len(header)} fields, found {len(fields)}", line=line)
        causes.append(fields[0])
        values.append([_float(text, line, "entry") for text in fields[1:]])
    if not causes:
        raise InputError(f"{path} has no rows")

    matrix = np.array(values)
    cause_space, effect_space = ValueSpace(labels=causes), ValueSpace(labels=effects)
    if kind == "utility":
        return UtilityTable(cause_space=cause_space, effect_space=effect_space, values=matrix)

    sums = matrix.sum(axis=1)
    off = np.flatnonzero(np.abs(sums - 1.0) > RENORMALISE_TOL)
    if off.size:
        raise StochasticityError(f"row {causes[off[0]]!r} of {path} sums to {sums[off[0]]!r}")
    if np.any(np.abs(sums - 1.0) > ROW_SUM_TOL):
        logger.warning(f"Renormalising CPT rows of {path} that sum to within {RENORMALISE_TOL} of 1")
        matrix = matrix / sums[:, None]
    return Cpt(cause_space=cause_space, effect_space=effect_space, rows=matrix, kind=cpt_kind)


def write_samples_csv(data: SampleSet, path: PathLike) -> None:
    """Write records in the layout parse_samples_csv reads."""
    if data.continuous_causes or data.continuous_effects:
        header = [f"c_{i + 1}" for i in range(_width(data, "cause"))]
        header += [f"e_{i + 1}" for i in range(_width(data, "effect"))]
    else:
        header = ["c", "e"]
    if data.has_utilities:
        header.append("u")
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header)
        for record in data.records():
            row: List = []
            for value in record[:2]:
                if isinstance(value, list):
                    row.extend(repr(float(v)) for v in value)
                else:
                    row.append(value)
            if data.has_utilities:
                row.append(repr(record[2]))
            writer.writerow(row)


def _width(data: SampleSet, side: str) -> int:
    vectors = data.cause_vectors if side == "cause" else data.effect_vectors
    if vectors is None:
        raise InputError(f"vector sample files need vector {side}s as well")
    return vectors.shape[1]


def write_matrix_csv(table: Union[Cpt, UtilityTable], path: PathLike) -> None:
    matrix = table.rows if isinstance(table, Cpt) else table.values
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["cause", *table.effect_space.labels])
        for label, row in zip(table.cause_space.labels, matrix):
            writer.writerow([label, *(repr(float(v)) for v in row)])
