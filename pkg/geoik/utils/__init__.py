"""Utility helpers for geoik."""
