"""Orchestration package."""
from .workflow import causal_pipeline, pragmatic_pipeline

__all__ = ["causal_pipeline", "pragmatic_pipeline"]
