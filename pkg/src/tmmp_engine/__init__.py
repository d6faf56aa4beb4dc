"""Exact toric minimal model program engine."""
