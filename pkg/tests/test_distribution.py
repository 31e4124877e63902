"""
Tests for exact confounded joints
"""
import numpy as np
import pytest
from hypothesis import given, settings as hsettings
from hypothesis import strategies as st

from macrocause.models import ConfoundedJoint, CptKind, InputError, ShapeError, ZeroMarginalError
from macrocause.services import distribution_service, equivalence_service
from macrocause.simulation import pair_violations, plant_duplicate_tie, sample_joint, uniform_utility
from tests.factories import space


class TestConditionals:
    """Test interventional and observational CPTs"""

    def test_kinds(self, rng):
        """Each conditional carries its kind"""
        joint = sample_joint(3, 4, 2, rng)
        assert distribution_service.interventional_cpt(joint).kind is CptKind.INTERVENTIONAL
        assert distribution_service.observational_cpt(joint).kind is CptKind.OBSERVATIONAL

    def test_observational_matches_joint_table(self, rng):
        """p(e | c) is the normalised joint table summed over confounders"""
        joint = sample_joint(3, 4, 2, rng)
        table = distribution_service.joint_table(joint).sum(axis=1).T
        expected = table / table.sum(axis=1, keepdims=True)
        np.testing.assert_allclose(distribution_service.observational_cpt(joint).rows, expected, atol=1e-12)
        np.testing.assert_allclose(distribution_service.cause_marginal(joint), table.sum(axis=1), atol=1e-12)

    def test_single_confounder_means_no_confounding(self, rng):
        """With one confounder value both conditionals coincide"""
        joint = sample_joint(4, 3, 1, rng)
        np.testing.assert_allclose(distribution_service.observational_cpt(joint).rows,
                                   distribution_service.interventional_cpt(joint).rows, atol=1e-12)

    def test_zero_marginal(self):
        """A cause value never chosen has no observational row"""
        joint = ConfoundedJoint(
            cause_space=space("c", 2), effect_space=space("e", 2), confounder_space=space("z", 1),
            iota=np.full((2, 1, 2), 0.5), beta=[[1.0], [0.0]], gamma=[1.0])
        with pytest.raises(ZeroMarginalError) as excinfo:
            distribution_service.observational_cpt(joint)
        assert excinfo.value.label == "c1"
        assert distribution_service.interventional_cpt(joint).n_causes == 2


class TestConstraint:
    """Test the observational tie constraint"""

    @hsettings(max_examples=100, deadline=None)
    @given(st.integers(0, 100_000))
    def test_residual_is_weighted_gap(self, seed):
        """Residual equals p(c_j) p(c_k) times the observational expected-utility gap"""
        rng = np.random.default_rng(seed)
        joint = sample_joint(3, 3, 2, rng)
        util = uniform_utility(joint.cause_space, joint.effect_space, rng)
        eu = equivalence_service.expected_utilities(distribution_service.observational_cpt(joint), util).values
        p = distribution_service.cause_marginal(joint)
        residual = distribution_service.eq_constraint_residual(joint, util, 0, 2)
        assert residual == pytest.approx(p[0] * p[2] * (eu[0] - eu[2]), abs=1e-10)

    def test_zero_residual_means_observational_tie(self):
        """Across 1000 seeded joints a residual of zero and opc equivalence coincide for every pair"""
        tied_pairs = 0
        for trial in range(1000):
            rng = np.random.default_rng([21, trial])
            joint = sample_joint(3, 3, 2, rng)
            util = uniform_utility(joint.cause_space, joint.effect_space, rng)
            if trial % 2 == 0:
                joint, util = plant_duplicate_tie(joint, util, 0, 2)
            opc = equivalence_service.observational_pragmatic_causal_coarsening(
                distribution_service.observational_cpt(joint), util, tol=1e-9)
            classes = opc.assignment()
            p = distribution_service.cause_marginal(joint)
            for j in range(3):
                for k in range(j + 1, 3):
                    residual = distribution_service.eq_constraint_residual(joint, util, j, k)
                    vanishes = abs(residual) <= 1e-9 * p[j] * p[k]
                    assert vanishes == (classes[j] == classes[k])
                    tied_pairs += int(vanishes)
        assert tied_pairs >= 500

    def test_flagged_pairs_have_small_residuals(self):
        """A pair flagged at eps has a residual below eps times its cause weights"""
        for trial in range(200):
            rng = np.random.default_rng([22, trial])
            joint = sample_joint(4, 3, 2, rng)
            util = uniform_utility(joint.cause_space, joint.effect_space, rng)
            joint, util = plant_duplicate_tie(joint, util, 1, 3)
            p = distribution_service.cause_marginal(joint)
            for eps in (1e-1, 1e-3, 1e-9):
                flagged, _ = pair_violations(joint, util, eps)
                assert (1, 3) in flagged
                for j, k in flagged:
                    residual = distribution_service.eq_constraint_residual(joint, util, j, k)
                    assert abs(residual) <= eps * p[j] * p[k] + 1e-12

    def test_quadratic_form(self, rng):
        """The constraint matrix reproduces the residual as a quadratic form in gamma"""
        joint = sample_joint(2, 3, 3, rng)
        util = uniform_utility(joint.cause_space, joint.effect_space, rng)
        matrix = distribution_service.constraint_matrix(joint, util, 0, 1)
        assert joint.gamma @ matrix @ joint.gamma == pytest.approx(
            distribution_service.eq_constraint_residual(joint, util, 0, 1))

    def test_index_out_of_range(self, rng):
        """Cause indices must exist"""
        joint = sample_joint(2, 2, 2, rng)
        util = uniform_utility(joint.cause_space, joint.effect_space, rng)
        with pytest.raises(ShapeError):
            distribution_service.eq_constraint_residual(joint, util, 0, 5)


class TestPersistence:
    """Test JSON documents of joints"""

    def test_save_and_load(self, rng, tmp_path):
        """A saved joint loads back unchanged"""
        joint = sample_joint(2, 3, 2, rng)
        path = tmp_path / "joint.json"
        distribution_service.save(joint, path)
        loaded = distribution_service.load(path)
        assert loaded.dims == joint.dims
        np.testing.assert_allclose(loaded.iota, joint.iota)
        np.testing.assert_allclose(loaded.gamma, joint.gamma)

    def test_missing_key(self):
        """Documents without a required key are rejected"""
        with pytest.raises(InputError):
            distribution_service.from_dict({"cause_labels": ["a"]})

    def test_invalid_json(self, tmp_path):
        """Broken JSON is reported with its line"""
        path = tmp_path / "broken.json"
        path.write_text("{\n  nope\n}")
        with pytest.raises(InputError) as excinfo:
            distribution_service.load(path)
        assert excinfo.value.line == 2


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
