"""Configuration package."""
from .settings import settings, resolve_tolerance

__all__ = ["settings", "resolve_tolerance"]
