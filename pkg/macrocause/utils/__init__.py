"""Utilities package."""
from .csv_io import parse_matrix_csv, parse_samples_csv, write_matrix_csv, write_samples_csv
from .fixtures import fixture_path, load_expected_coarse, load_scm_tables, load_smoking

__all__ = [
    "parse_matrix_csv",
    "parse_samples_csv",
    "write_matrix_csv",
    "write_samples_csv",
    "fixture_path",
    "load_expected_coarse",
    "load_scm_tables",
    "load_smoking",
]
