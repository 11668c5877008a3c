"""Weakly q-convex bump fields carried by hat pairs."""

from src.bump.field import hat_bump, phi_tilde, psi_r, theta
from src.bump.params import BumpParams
from src.bump.validate import certify_surrogate, validate_bump

__all__ = [
    "BumpParams",
    "certify_surrogate",
    "hat_bump",
    "phi_tilde",
    "psi_r",
    "theta",
    "validate_bump",
]
