"""Permutation-symmetry models."""

from .models import (
    CellOrbitIndex,
    check_symmetric_mobius,
    combined_fit,
    connected_set_orbits,
    orbit_reciprocal_sum,
    symmetric_counts,
    symmetric_independence_dim,
    symmetry_mle,
    symmetry_model_dim,
)

__all__ = [
    "CellOrbitIndex",
    "check_symmetric_mobius",
    "combined_fit",
    "connected_set_orbits",
    "orbit_reciprocal_sum",
    "symmetric_counts",
    "symmetric_independence_dim",
    "symmetry_mle",
    "symmetry_model_dim",
]
