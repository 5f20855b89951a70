"""Errors, configuration and shared settings."""
