"""Levi forms, eigenvalue signatures and q-convexity classification."""

from src.levi.classify import classify_max_point, classify_point, scan_region, weakest_branch
from src.levi.forms import ConvexityClass, HermitianForm, Signature, signature
from src.levi.hessian import complex_hessian

__all__ = [
    "ConvexityClass",
    "HermitianForm",
    "Signature",
    "classify_max_point",
    "classify_point",
    "complex_hessian",
    "scan_region",
    "signature",
    "weakest_branch",
]
