"""Loaders for the tables shipped under macrocause/fixtures."""
from pathlib import Path
from typing import Tuple

from macrocause.models.schemas import Cpt, CptKind, UtilityTable
from macrocause.utils.csv_io import parse_matrix_csv

FIXTURES_DIR = Path(__file__).resolve().parent.parent / "fixtures"


def fixture_path(name: str) -> Path:
    path = FIXTURES_DIR / name
    if not path.exists():
        raise FileNotFoundError(f"no shipped fixture named {name!r}")
    return path


def load_smoking() -> Tuple[Cpt, UtilityTable]:
    """Interventional smoking CPT over mortality-age bands and its utilities."""
    cpt = parse_matrix_csv(fixture_path("smoking_cpt.csv"), "cpt", CptKind.INTERVENTIONAL)
    util = parse_matrix_csv(fixture_path("smoking_util.csv"), "utility")
    return cpt, util


def load_scm_tables() -> Tuple[Cpt, UtilityTable]:
    """Observational CPT of the two-layer SCM and its utility table."""
    cpt = parse_matrix_csv(fixture_path("scm_cpt.csv"), "cpt", CptKind.OBSERVATIONAL)
    util = parse_matrix_csv(fixture_path("scm_util.csv"), "utility")
    return cpt, util


def load_expected_coarse(name: str) -> Cpt:
    """Expected coarse CPT: ``"cfl"`` or ``"pcfl"``."""
    return parse_matrix_csv(fixture_path(f"scm_{name}_expected.csv"), "cpt", CptKind.OBSERVATIONAL)
