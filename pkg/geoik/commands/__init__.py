"""Commands package for geoik."""
