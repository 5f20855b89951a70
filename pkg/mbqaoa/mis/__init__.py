"""Constraint-preserving QAOA for maximum independent set."""
