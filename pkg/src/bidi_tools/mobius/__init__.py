"""Möbius parametrization of binary distributions."""

from .transforms import (
    CellDistribution,
    ConnectedParams,
    DependenceRatios,
    MembershipReport,
    MobiusVector,
    check_membership,
    dependence_ratios,
    extend_connected,
    flip_labels,
    mobius_forward,
    mobius_inverse,
    parametrize,
)

__all__ = [
    "CellDistribution",
    "ConnectedParams",
    "DependenceRatios",
    "MembershipReport",
    "MobiusVector",
    "check_membership",
    "dependence_ratios",
    "extend_connected",
    "flip_labels",
    "mobius_forward",
    "mobius_inverse",
    "parametrize",
]
