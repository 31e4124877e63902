"""Random tables and joints shared by the test modules."""
import numpy as np

from macrocause.models.schemas import Cpt, CptKind, UtilityTable, ValueSpace


def space(prefix: str, n: int) -> ValueSpace:
    return ValueSpace(labels=[f"{prefix}{i}" for i in range(n)])


def random_cpt(rng: np.random.Generator, m: int, n: int,
               kind: CptKind = CptKind.INTERVENTIONAL) -> Cpt:
    rows = rng.exponential(size=(m, n))
    return Cpt(cause_space=space("c", m), effect_space=space("e", n),
               rows=rows / rows.sum(axis=1, keepdims=True), kind=kind)


def random_util(rng: np.random.Generator, m: int, n: int, integer: bool = False) -> UtilityTable:
    values = rng.integers(0, 3, size=(m, n)).astype(float) if integer else rng.uniform(0, 10, size=(m, n))
    return UtilityTable(cause_space=space("c", m), effect_space=space("e", n), values=values)


def eighths_cpt(rng: np.random.Generator, m: int, n: int,
                kind: CptKind = CptKind.OBSERVATIONAL) -> Cpt:
    """CPT whose entries are positive multiples of 1/8."""
    rows = []
    for _ in range(m):
        cuts = np.sort(rng.choice(np.arange(1, 8), size=n - 1, replace=False))
        rows.append(np.diff(np.concatenate([[0], cuts, [8]])) / 8.0)
    return Cpt(cause_space=space("c", m), effect_space=space("e", n), rows=np.array(rows), kind=kind)


def with_duplicate_rows(cpt: Cpt, copies: dict) -> Cpt:
    """Copy row ``src`` onto row ``dst`` for every ``dst: src`` entry."""
    rows = cpt.rows.copy()
    for dst, src in copies.items():
        rows[dst] = rows[src]
    return Cpt(cause_space=cpt.cause_space, effect_space=cpt.effect_space, rows=rows, kind=cpt.kind)


def label_sets(partition) -> set:
    return {frozenset(members) for members in partition.as_labels()}
