"""Partitions of value spaces: construction, refinement and lifting."""
from typing import Iterable, List, Sequence

import numpy as np

from macrocause.models.errors import ShapeError
from macrocause.models.schemas import Partition, ValueSpace


class UnionFind:
    """
    Disjoint sets over the integers ``0..n-1`` with union by rank and path compression.

    Examples
    --------
    >>> uf = UnionFind(5)
    >>> uf.union(0, 1)
    >>> uf.union(1, 2)
    >>> uf.find(2) == uf.find(0)
    True
    >>> uf.find(3) == uf.find(0)
    False
    """

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.rank = [0] * n

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        # path compression
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x: int, y: int) -> None:
        px, py = self.find(x), self.find(y)
        if px == py:
            return
        if self.rank[px] < self.rank[py]:
            px, py = py, px
        self.parent[py] = px
        if self.rank[px] == self.rank[py]:
            self.rank[px] += 1

    def groups(self) -> List[List[int]]:
        buckets: dict = {}
        for x in range(len(self.parent)):
            buckets.setdefault(self.find(x), []).append(x)
        return list(buckets.values())


def identity_partition(space: ValueSpace) -> Partition:
    """All-singleton partition."""
    return Partition(space=space, classes=tuple((i,) for i in range(len(space))))


def total_partition(space: ValueSpace) -> Partition:
    """Single-class partition."""
    return Partition(space=space, classes=(tuple(range(len(space))),))


def partition_from_pairs(space: ValueSpace, equivalent: np.ndarray) -> Partition:
    """Finest partition in which every ``True`` pair shares a class (transitive closure)."""
    table = np.asarray(equivalent, dtype=bool)
    n = len(space)
    if table.shape != (n, n):
        raise ShapeError(f"equivalence table has shape {table.shape}, expected {(n, n)}")
    uf = UnionFind(n)
    for i, j in zip(*np.nonzero(np.triu(table, k=1) | np.triu(table.T, k=1))):
        uf.union(int(i), int(j))
    return Partition.canonical(space, uf.groups())


def partition_from_labels(space: ValueSpace, labels: Sequence[int]) -> Partition:
    """Partition whose classes are the values sharing a cluster label."""
    labels = list(labels)
    if len(labels) != len(space):
        raise ShapeError(f"{len(labels)} cluster labels for a space of {len(space)} values")
    buckets: dict = {}
    for index, label in enumerate(labels):
        buckets.setdefault(label, []).append(index)
    return Partition.canonical(space, buckets.values())


def refines(coarse: Partition, fine: Partition) -> bool:
    """True iff every class of ``fine`` lies inside one class of ``coarse``."""
    if coarse.space != fine.space:
        raise ShapeError("partitions are over different value spaces")
    owner = coarse.assignment()
    return all(len({int(owner[i]) for i in cls_}) == 1 for cls_ in fine.classes)


def lift_partition(over_classes: Partition, fine: Partition) -> Partition:
    """Map a partition of ``fine``'s classes back onto ``fine``'s value space."""
    if len(over_classes.space) != fine.n_classes:
        raise ShapeError("the lifted partition must have one value per fine class")
    merged: List[List[int]] = []
    for group in over_classes.classes:
        members: List[int] = []
        for k in group:
            members.extend(fine.classes[k])
        merged.append(members)
    return Partition.canonical(fine.space, merged)


def restrict_partition(partition: Partition, labels: Iterable[str]) -> Partition:
    """Restriction of ``partition`` to the values named by ``labels``."""
    sub = partition.space.restrict(labels)
    lookup = sub.positions()
    classes = []
    for members in partition.as_labels():
        kept = [lookup[label] for label in members if label in lookup]
        if kept:
            classes.append(kept)
    return Partition.canonical(sub, classes)


def relabel(partition: Partition, space: ValueSpace) -> Partition:
    """The same grouping of labels expressed over a reordered ``space``."""
    if set(space.labels) != set(partition.space.labels):
        raise ShapeError("relabelling needs the same set of value labels")
    lookup = space.positions()
    return Partition.canonical(space, [[lookup[label] for label in members]
                                       for members in partition.as_labels()])
