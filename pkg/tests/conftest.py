import numpy as np
import pytest

from macrocause.simulation import build_fig1_scm
from macrocause.utils import load_expected_coarse, load_scm_tables, load_smoking


@pytest.fixture
def smoking():
    """Interventional smoking CPT and its utility table."""
    return load_smoking()


@pytest.fixture
def scm_tables():
    """Observational CPT and utilities of the two-layer SCM."""
    return load_scm_tables()


@pytest.fixture(scope="session")
def scm_joint():
    return build_fig1_scm()


@pytest.fixture
def expected_cfl():
    return load_expected_coarse("cfl")


@pytest.fixture
def expected_pcfl():
    return load_expected_coarse("pcfl")


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
