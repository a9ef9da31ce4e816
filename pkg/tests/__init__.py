"""Tests package for geoik."""
