"""Measurement patterns: model, causality validator and exact runtime."""
