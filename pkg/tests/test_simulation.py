"""
Tests for joint sampling, the two-layer SCM and the tie probes
"""
import numpy as np
import pytest

from macrocause.core import refines
from macrocause.models import InputError, RefinementReport, ShapeError, SolverError, UtilityTable, ValueSpace
from macrocause.services import distribution_service, equivalence_service
from macrocause.simulation import (
    exact_proportion_dataset,
    find_gamma_violation,
    fit_fig1_logits,
    pair_violations,
    plant_duplicate_tie,
    planted_refinement_probe,
    prop2_probe,
    sample_dataset,
    sample_joint,
    softmax_logits,
    solve_gamma_tie,
    uniform_utility,
)
from macrocause.simulation.scm import SCM_OBSERVATIONAL_ROWS, SCM_OBSERVED_Z1, SCM_VALUES, softmax


class TestSampleJoint:
    """Test random joints"""

    def test_dimensions(self, rng):
        """Arrays have the requested shapes"""
        joint = sample_joint(3, 4, 2, rng)
        assert joint.dims == (3, 4, 2)
        assert joint.iota.shape == (4, 2, 3)
        assert joint.beta.shape == (3, 2)

    def test_trivial_dimensions(self, rng):
        """A one-value space carries probability one"""
        joint = sample_joint(1, 1, 1, rng)
        assert joint.iota[0, 0, 0] == pytest.approx(1.0)
        assert joint.gamma[0] == pytest.approx(1.0)

    def test_bad_dimensions(self, rng):
        """Every space needs a value"""
        with pytest.raises(ShapeError):
            sample_joint(0, 2, 2, rng)

    def test_same_seed_same_joint(self):
        """Sampling is reproducible from a seed"""
        a = sample_joint(3, 3, 2, np.random.default_rng(9))
        b = sample_joint(3, 3, 2, np.random.default_rng(9))
        assert np.array_equal(a.iota, b.iota)

    def test_simplex_is_uniform(self):
        """Confounder distributions have the uniform-simplex mean"""
        rng = np.random.default_rng(0)
        draws = np.array([sample_joint(1, 1, 3, rng).gamma for _ in range(10000)])
        np.testing.assert_allclose(draws.mean(axis=0), 1 / 3, atol=0.01)


class TestScm:
    """Test the two-layer logit SCM"""

    def test_observational_rows(self, scm_joint, scm_tables):
        """The SCM reproduces the observational table"""
        obs = distribution_service.observational_cpt(scm_joint)
        np.testing.assert_allclose(obs.rows, SCM_OBSERVATIONAL_ROWS, atol=1e-6)
        np.testing.assert_allclose(obs.rows, scm_tables[0].rows, atol=1e-6)

    def test_uniform_cause_marginal(self, scm_joint):
        """Every cause value has probability one quarter"""
        np.testing.assert_allclose(distribution_service.cause_marginal(scm_joint), 0.25)

    def test_unobserved_combinations_use_the_logits(self, scm_joint):
        """Counterfactual (cause, confounder) rows come from the fitted logits"""
        model = fit_fig1_logits()
        for j, c in enumerate(SCM_VALUES):
            other = 1 - SCM_OBSERVED_Z1[j]
            np.testing.assert_allclose(scm_joint.iota[:, other, j], softmax_logits(model, float(c), other))

    def test_logits_nearly_reproduce_observed_rows(self):
        """The least-squares logits fit the observed rows closely"""
        model = fit_fig1_logits()
        for j, c in enumerate(SCM_VALUES):
            fitted = softmax_logits(model, float(c), SCM_OBSERVED_Z1[j])
            np.testing.assert_allclose(fitted, SCM_OBSERVATIONAL_ROWS[j], atol=5e-3)

    def test_softmax_is_stable(self):
        """Large logits do not overflow"""
        np.testing.assert_allclose(softmax(np.array([1000.0, 1000.0])), [0.5, 0.5])


class TestSampleDataset:
    """Test ancestral sampling"""

    def test_single_value(self, rng):
        """A one-value joint always yields the same record"""
        joint = sample_joint(1, 1, 1, rng)
        data = sample_dataset(joint, 1, rng)
        assert data.records() == [("c0", "e0")]

    def test_reproducible(self, scm_joint):
        """A fixed seed gives the same records"""
        a = sample_dataset(scm_joint, 500, np.random.default_rng(4))
        b = sample_dataset(scm_joint, 500, np.random.default_rng(4))
        assert a.records() == b.records()

    def test_frequencies_converge(self, scm_joint):
        """Empirical conditionals approach the observational table"""
        data = sample_dataset(scm_joint, 100000, np.random.default_rng(2))
        counts = data.counts()
        np.testing.assert_allclose(counts / counts.sum(axis=1, keepdims=True), SCM_OBSERVATIONAL_ROWS, atol=0.01)

    def test_utilities_attached(self, scm_joint, scm_tables):
        """Utilities come from the table entry of each record"""
        _, util = scm_tables
        data = sample_dataset(scm_joint, 50, np.random.default_rng(0), util=util)
        for c, e, u in data.records():
            assert u == util.lookup(c, e)

    def test_utilities_follow_labels_not_positions(self, scm_joint, scm_tables):
        """A utility table with reordered columns gives the same utilities"""
        _, util = scm_tables
        order = [2, 3, 0, 1]
        shuffled = UtilityTable(cause_space=util.cause_space,
                                effect_space=ValueSpace(labels=[util.effect_space.labels[i] for i in order]),
                                values=util.values[:, order])
        a = sample_dataset(scm_joint, 200, np.random.default_rng(6), util=util)
        b = sample_dataset(scm_joint, 200, np.random.default_rng(6), util=shuffled)
        assert a.records() == b.records()

    def test_utility_table_missing_values(self, scm_joint):
        """Every sampled label needs a utility"""
        util = UtilityTable(cause_space=scm_joint.cause_space, effect_space=ValueSpace(labels=["-2", "-1"]),
                            values=np.zeros((4, 2)))
        with pytest.raises(ShapeError):
            sample_dataset(scm_joint, 10, util=util)

    def test_bad_count(self, scm_joint):
        """At least one sample is required"""
        with pytest.raises(ShapeError):
            sample_dataset(scm_joint, 0)

    def test_exact_proportions_need_integral_counts(self, scm_tables):
        """Counts must come out whole"""
        with pytest.raises(InputError):
            exact_proportion_dataset(scm_tables[0], 10)


class TestPairViolations:
    """Test the eps-relaxed tie probe"""

    def test_unconfounded_joints_never_violate(self):
        """Without confounding no flagged pair breaks under intervention"""
        report = prop2_probe((3, 3, 1), 200, (1e-1, 1e-2, 1e-3), seed=1)
        assert report.violations == [0, 0, 0]
        assert report.pairs_per_trial == 3

    def test_curve_is_monotone(self):
        """Violations cannot grow as eps shrinks"""
        report = prop2_probe((3, 3, 2), 300, (1e-1, 1e-2, 1e-3, 1e-4), seed=2)
        assert report.flagged == sorted(report.flagged, reverse=True)
        assert report.violations == sorted(report.violations, reverse=True)
        assert all(0.0 <= r <= 1.0 for r in report.rates)

    def test_curve_is_monotone_at_larger_dims(self):
        """Violation counts never grow as eps shrinks on 4x4x3 joints"""
        report = prop2_probe((4, 4, 3), 1000, (1e-1, 1e-2, 1e-3, 1e-4, 1e-6), seed=3)
        assert report.pairs_per_trial == 6
        assert all(a >= b for a, b in zip(report.violations, report.violations[1:]))
        assert all(a >= b for a, b in zip(report.flagged, report.flagged[1:]))
        assert all(v <= f for v, f in zip(report.violations, report.flagged))

    def test_probe_is_reproducible(self):
        """The same seed gives the same report"""
        a = prop2_probe((3, 3, 2), 50, (1e-1,), seed=5)
        b = prop2_probe((3, 3, 2), 50, (1e-1,), seed=5)
        assert a.violations == b.violations

    def test_bad_grid(self):
        """The eps grid must be positive"""
        with pytest.raises(ValueError):
            prop2_probe((2, 2, 2), 1, (0.0,))

    def test_gamma_violation(self):
        """A solved confounder distribution ties observationally but not interventionally"""
        joint, util = find_gamma_violation(seed=0)
        flagged, violations = pair_violations(joint, util, eps=1e-6)
        assert (0, 1) in flagged
        assert distribution_service.eq_constraint_residual(joint, util, 0, 1) == pytest.approx(0.0, abs=1e-9)
        intv = equivalence_service.expected_utilities(distribution_service.interventional_cpt(joint), util).values
        assert abs(intv[0] - intv[1]) > 1e-5
        assert violations == [(0, 1)]

    def test_residual_matches_observational_ties(self, rng):
        """Zero residual and an observational pragmatic tie go together"""
        joint = sample_joint(2, 2, 2, rng)
        util = uniform_utility(joint.cause_space, joint.effect_space, rng)
        for tied in solve_gamma_tie(joint, util, 0, 1, [0.9, 0.1]) + solve_gamma_tie(joint, util, 0, 1, [0.1, 0.9]):
            obs = distribution_service.observational_cpt(tied)
            p = equivalence_service.observational_pragmatic_causal_coarsening(obs, util, tol=1e-8)
            assert p.n_classes == 1

    def test_gamma_tie_shape(self, rng):
        """The target distribution must match the confounder space"""
        joint = sample_joint(2, 2, 2, rng)
        util = uniform_utility(joint.cause_space, joint.effect_space, rng)
        with pytest.raises(ShapeError):
            solve_gamma_tie(joint, util, 0, 1, [1.0])

    def test_search_can_give_up(self):
        """An exhausted search raises SolverError"""
        with pytest.raises(SolverError):
            find_gamma_violation(seed=0, max_tries=0)


class TestPlantedTies:
    """Test exact planted ties"""

    def test_plant_duplicate_tie(self, rng):
        """A planted copy ties in both observational and interventional expected utility"""
        joint = sample_joint(3, 3, 2, rng)
        util = uniform_utility(joint.cause_space, joint.effect_space, rng)
        planted, planted_util = plant_duplicate_tie(joint, util, 0, 2)
        int_cpt = distribution_service.interventional_cpt(planted)
        np.testing.assert_allclose(int_cpt.rows[0], int_cpt.rows[2])
        np.testing.assert_allclose(planted_util.values[0], planted_util.values[2])

    def test_same_index(self, rng):
        """Planting needs two different causes"""
        joint = sample_joint(3, 3, 2, rng)
        util = uniform_utility(joint.cause_space, joint.effect_space, rng)
        with pytest.raises(ShapeError):
            plant_duplicate_tie(joint, util, 1, 1)

    def test_pragmatic_refinement_always_holds(self):
        """Interventional pragmatic classes are unions of observational ones on planted ties"""
        report = planted_refinement_probe((4, 4, 3), 10000, seed=0)
        assert isinstance(report, RefinementReport)
        assert report.holds == report.trials == 10000
        assert report.rate == 1.0

    def test_causal_refinement_always_holds(self):
        """The same holds for the causal relations"""
        report = planted_refinement_probe((3, 3, 2), 500, seed=1, relation="causal")
        assert report.holds == 500

    def test_scm_direct_refines_observational(self, scm_joint, scm_tables):
        """On the SCM the pragmatic partition is coarser than the observational one"""
        _, util = scm_tables
        pc = equivalence_service.pragmatic_causal_coarsening(distribution_service.interventional_cpt(scm_joint), util)
        opc = equivalence_service.observational_pragmatic_causal_coarsening(
            distribution_service.observational_cpt(scm_joint), util)
        assert refines(pc, opc)

    def test_unknown_relation(self):
        """Only the pragmatic and causal relations can be planted"""
        with pytest.raises(ValueError):
            planted_refinement_probe((3, 3, 2), 1, relation="effect")


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
