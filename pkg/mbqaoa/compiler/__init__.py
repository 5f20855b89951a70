"""QAOA to MBQC compilation, resource accounting and verification."""
