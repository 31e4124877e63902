"""Causal and pragmatic coarsening of cause and effect variables."""
