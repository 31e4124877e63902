"""
Tests for partitions and macro-level tables
"""
import numpy as np
import pytest
from hypothesis import given, settings as hsettings
from hypothesis import strategies as st
from pydantic import ValidationError

from macrocause.core import (
    UnionFind,
    coarse_space,
    coarsen_cpt,
    coarsen_utility,
    empirical_coarse_cpt,
    identity_partition,
    lift_partition,
    partition_from_labels,
    partition_from_pairs,
    refines,
    relabel,
    restrict_partition,
    total_partition,
    uniform_marginal,
)
from macrocause.models import (
    Cpt,
    CptKind,
    DegenerateClassError,
    Partition,
    SampleSet,
    ShapeError,
    UtilityTable,
    ValueSpace,
)
from tests.factories import random_cpt, space


def brute_force_refines(coarse: Partition, fine: Partition) -> bool:
    a, b = coarse.assignment(), fine.assignment()
    n = len(a)
    return all(a[i] == a[j] for i in range(n) for j in range(n) if b[i] == b[j])


class TestUnionFind:
    """Test the disjoint-set structure"""

    def test_groups_follow_unions(self):
        """Unions join groups transitively"""
        uf = UnionFind(5)
        uf.union(0, 3)
        uf.union(3, 4)
        groups = sorted(sorted(g) for g in uf.groups())
        assert groups == [[0, 3, 4], [1], [2]]

    def test_union_is_idempotent(self):
        """Repeated unions do not change the grouping"""
        uf = UnionFind(3)
        uf.union(0, 1)
        uf.union(1, 0)
        assert uf.find(0) == uf.find(1)
        assert len(uf.groups()) == 2


class TestPartition:
    """Test partition construction and validation"""

    def test_canonical_orders_classes(self):
        """Classes are sorted and ordered by smallest member"""
        p = Partition.canonical(space("v", 4), [[3, 1], [2], [0]])
        assert p.classes == ((0,), (1, 3), (2,))

    def test_macro_labels_join_members(self):
        """Macro labels join member labels with the disjunction sign"""
        p = Partition.canonical(ValueSpace(labels=["a", "b", "c"]), [[0, 2], [1]])
        assert p.macro_labels() == ["a∨c", "b"]
        assert coarse_space(p).labels == ("a∨c", "b")

    def test_overlapping_classes_rejected(self):
        """Classes sharing a value fail validation"""
        with pytest.raises(ValidationError):
            Partition(space=space("v", 3), classes=((0, 1), (1, 2)))

    def test_uncovered_value_rejected(self):
        """A partition must cover every value"""
        with pytest.raises(ValidationError):
            Partition(space=space("v", 3), classes=((0, 1),))

    def test_identity_and_total(self):
        """Identity has singletons, total has one class"""
        s = space("v", 4)
        assert identity_partition(s).is_identity()
        assert total_partition(s).n_classes == 1

    def test_from_pairs_closes_transitively(self):
        """Chained pairs end up in one class"""
        table = np.zeros((4, 4), dtype=bool)
        table[0, 1] = table[1, 2] = True
        p = partition_from_pairs(space("v", 4), table)
        assert p.classes == ((0, 1, 2), (3,))

    def test_from_pairs_shape_mismatch(self):
        """A table of the wrong size raises ShapeError"""
        with pytest.raises(ShapeError):
            partition_from_pairs(space("v", 3), np.zeros((2, 2), dtype=bool))

    def test_from_labels(self):
        """Values sharing a cluster label share a class"""
        p = partition_from_labels(space("v", 4), [7, 3, 7, 3])
        assert p.classes == ((0, 2), (1, 3))


class TestRefinement:
    """Test refinement, lifting and restriction"""

    def test_identity_refines_everything(self):
        """Every partition is coarser than the identity"""
        s = space("v", 5)
        p = partition_from_labels(s, [0, 0, 1, 2, 1])
        assert refines(p, identity_partition(s))
        assert refines(total_partition(s), p)
        assert not refines(identity_partition(s), p)

    def test_refines_needs_same_space(self):
        """Partitions over different spaces cannot be compared"""
        with pytest.raises(ShapeError):
            refines(identity_partition(space("v", 2)), identity_partition(space("w", 2)))

    @hsettings(max_examples=200, deadline=None)
    @given(st.lists(st.integers(0, 3), min_size=1, max_size=7), st.data())
    def test_refines_matches_brute_force(self, labels_a, data):
        """Refinement agrees with the pairwise definition"""
        labels_b = data.draw(st.lists(st.integers(0, 3), min_size=len(labels_a), max_size=len(labels_a)))
        s = space("v", len(labels_a))
        a, b = partition_from_labels(s, labels_a), partition_from_labels(s, labels_b)
        assert refines(a, b) == brute_force_refines(a, b)

    @hsettings(max_examples=100, deadline=None)
    @given(st.lists(st.integers(0, 2), min_size=1, max_size=6), st.data())
    def test_refinement_is_a_partial_order(self, labels_a, data):
        """Refinement is reflexive, antisymmetric and transitive"""
        n = len(labels_a)
        labels_b = data.draw(st.lists(st.integers(0, 2), min_size=n, max_size=n))
        labels_c = data.draw(st.lists(st.integers(0, 2), min_size=n, max_size=n))
        s = space("v", n)
        a, b, c = (partition_from_labels(s, x) for x in (labels_a, labels_b, labels_c))
        assert refines(a, a)
        if refines(a, b) and refines(b, a):
            assert a == b
        if refines(a, b) and refines(b, c):
            assert refines(a, c)

    def test_lift_partition(self):
        """Merging coarse classes merges their members"""
        fine = partition_from_labels(space("v", 5), [0, 0, 1, 2, 2])
        over = partition_from_labels(space("k", 3), [0, 1, 0])
        lifted = lift_partition(over, fine)
        assert lifted.classes == ((0, 1, 3, 4), (2,))
        assert refines(lifted, fine)

    def test_lift_partition_size_mismatch(self):
        """The lifted partition needs one value per fine class"""
        fine = partition_from_labels(space("v", 3), [0, 0, 1])
        with pytest.raises(ShapeError):
            lift_partition(identity_partition(space("k", 3)), fine)

    def test_restrict_partition(self):
        """Restriction keeps the grouping of the remaining labels"""
        p = partition_from_labels(ValueSpace(labels=["a", "b", "c", "d"]), [0, 1, 0, 1])
        sub = restrict_partition(p, ["d", "a", "c"])
        assert sub.space.labels == ("a", "c", "d")
        assert sub.as_labels() == [["a", "c"], ["d"]]

    def test_relabel(self):
        """Relabelling reorders the space but keeps the groups"""
        p = partition_from_labels(ValueSpace(labels=["a", "b", "c"]), [0, 1, 0])
        moved = relabel(p, ValueSpace(labels=["c", "b", "a"]))
        assert {frozenset(m) for m in moved.as_labels()} == {frozenset("ac"), frozenset("b")}


class TestCoarsenCpt:
    """Test macro-level CPTs"""

    def test_identity_partitions_keep_the_table(self, rng):
        """Coarsening by identities relabels nothing and changes nothing"""
        cpt = random_cpt(rng, 3, 4)
        out = coarsen_cpt(cpt, identity_partition(cpt.cause_space), identity_partition(cpt.effect_space),
                          uniform_marginal(cpt.cause_space))
        np.testing.assert_allclose(out.rows, cpt.rows)
        assert out.kind is CptKind.INTERVENTIONAL

    def test_marginal_weighting(self):
        """Rows in a class are averaged by the renormalised marginal"""
        cpt = Cpt(cause_space=space("c", 2), effect_space=space("e", 2),
                  rows=[[1.0, 0.0], [0.0, 1.0]])
        out = coarsen_cpt(cpt, total_partition(cpt.cause_space), identity_partition(cpt.effect_space),
                          [0.75, 0.25])
        np.testing.assert_allclose(out.rows, [[0.75, 0.25]])
        assert out.cause_space.labels == ("c0∨c1",)

    def test_scm_coarse_cpt(self, scm_tables, expected_cfl):
        """Coarsening the SCM rows by the causal partitions gives the expected table"""
        cpt, _ = scm_tables
        causes = partition_from_labels(cpt.cause_space, [0, 1, 1, 2])
        effects = partition_from_labels(cpt.effect_space, [0, 1, 2, 0])
        out = coarsen_cpt(cpt, causes, effects, uniform_marginal(cpt.cause_space))
        assert out.cause_space == expected_cfl.cause_space
        assert out.effect_space == expected_cfl.effect_space
        np.testing.assert_allclose(out.rows, expected_cfl.rows, atol=1e-9)

    @hsettings(max_examples=50, deadline=None)
    @given(st.integers(0, 10_000), st.integers(1, 5), st.integers(1, 5))
    def test_rows_stay_stochastic(self, seed, m, n):
        """Coarse rows sum to one"""
        rng = np.random.default_rng(seed)
        cpt = random_cpt(rng, m, n)
        causes = partition_from_labels(cpt.cause_space, rng.integers(0, 2, size=m))
        effects = partition_from_labels(cpt.effect_space, rng.integers(0, 2, size=n))
        out = coarsen_cpt(cpt, causes, effects, rng.uniform(0.1, 1.0, size=m))
        np.testing.assert_allclose(out.rows.sum(axis=1), 1.0, atol=1e-12)

    def test_zero_mass_class(self, rng):
        """A cause class with no marginal mass cannot be averaged"""
        cpt = random_cpt(rng, 3, 2)
        causes = partition_from_labels(cpt.cause_space, [0, 1, 1])
        with pytest.raises(DegenerateClassError):
            coarsen_cpt(cpt, causes, identity_partition(cpt.effect_space), [1.0, 0.0, 0.0])

    def test_partition_over_other_space(self, rng):
        """Partitions must be over the table's spaces"""
        cpt = random_cpt(rng, 2, 2)
        with pytest.raises(ShapeError):
            coarsen_cpt(cpt, identity_partition(space("x", 2)), identity_partition(cpt.effect_space), [0.5, 0.5])


class TestCoarsenUtility:
    """Test macro-level utility tables"""

    def test_probability_weighted_effects(self):
        """Merged effects are averaged by the row's conditional probabilities"""
        s_c, s_e = space("c", 1), space("e", 2)
        util = UtilityTable(cause_space=s_c, effect_space=s_e, values=[[0.0, 10.0]])
        cpt = Cpt(cause_space=s_c, effect_space=s_e, rows=[[0.2, 0.8]])
        out = coarsen_utility(util, identity_partition(s_c), total_partition(s_e), [1.0], cpt)
        assert out.values[0, 0] == pytest.approx(8.0)

    def test_uniform_without_cpt(self):
        """Without a CPT merged effects are averaged uniformly"""
        s_c, s_e = space("c", 2), space("e", 2)
        util = UtilityTable(cause_space=s_c, effect_space=s_e, values=[[0.0, 10.0], [2.0, 4.0]])
        out = coarsen_utility(util, total_partition(s_c), total_partition(s_e), [0.5, 0.5])
        assert out.values[0, 0] == pytest.approx(4.0)

    def test_identical_columns_merge_unchanged(self, scm_tables):
        """Merging effects -1 and 1 keeps their shared utility column"""
        cpt, util = scm_tables
        effects = partition_from_labels(util.effect_space, [0, 1, 1, 2])
        out = coarsen_utility(util, identity_partition(util.cause_space), effects,
                              uniform_marginal(util.cause_space), cpt)
        assert out.effect_space.labels == ("-2", "-1∨1", "2")
        np.testing.assert_allclose(out.values[:, 1], [2, 5, 8, 2])
        np.testing.assert_allclose(out.values[:, [0, 2]], util.values[:, [0, 3]])

    def test_degenerate_weights_keep_first_row(self):
        """Cause weights (1, 0) make the merged row the first row"""
        s_c, s_e = space("c", 2), space("e", 2)
        util = UtilityTable(cause_space=s_c, effect_space=s_e, values=[[1.0, 2.0], [3.0, 4.0]])
        out = coarsen_utility(util, total_partition(s_c), identity_partition(s_e), [1.0, 0.0])
        np.testing.assert_allclose(out.values, [[1.0, 2.0]])


class TestEmpiricalCoarseCpt:
    """Test coarse CPTs estimated from counts"""

    def _data(self):
        return SampleSet.from_records([("a", "x"), ("a", "y"), ("b", "x"), ("b", "x")])

    def test_counts_per_class(self):
        """Rows are class frequencies"""
        data = self._data()
        out = empirical_coarse_cpt(data, total_partition(data.cause_space), identity_partition(data.effect_space))
        np.testing.assert_allclose(out.rows, [[0.75, 0.25]])
        assert out.kind is CptKind.OBSERVATIONAL

    def test_laplace_smoothing(self):
        """Smoothing adds alpha to every coarse count"""
        data = self._data()
        out = empirical_coarse_cpt(data, identity_partition(data.cause_space),
                                   identity_partition(data.effect_space), alpha=1.0)
        np.testing.assert_allclose(out.rows, [[0.5, 0.5], [0.75, 0.25]])


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
