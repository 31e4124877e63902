"""Configuration settings for macrocause."""
from pydantic_settings import BaseSettings
from typing import Optional
from dotenv import load_dotenv
load_dotenv()


class Settings(BaseSettings):
    """Library and CLI settings loaded from environment variables."""

    # Application
    app_name: str = "macrocause"
    app_version: str = "1.0.0"
    log_level: str = "WARNING"

    # Exact-mode probability comparisons
    tolerance: float = 1e-9

    # Clustering defaults for the sample-based learners
    cluster_method: str = "tol"
    cluster_tol: float = 0.05
    k_clusters: Optional[int] = None
    knn_k: int = 5
    seed: int = 0
    smoothing_alpha: float = 0.0

    # Simulation
    n_samples: int = 10000
    prop2_delta: float = 1e-6
    utility_low: float = 0.0
    utility_high: float = 10.0

    # Output
    output_format: str = "text"

    class Config:
        env_file = ".env"
        env_prefix = "MACROCAUSE_"
        case_sensitive = False


# Global settings instance
settings = Settings()


def resolve_tolerance(tol: Optional[float]) -> float:
    """Return ``tol`` or the configured default when it is None."""
    return settings.tolerance if tol is None else float(tol)
