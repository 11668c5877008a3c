"""Spherical cuts and the q-nucleus."""

from src.cuts.nucleus import (
    NucleusResult,
    approximate_nucleus,
    monotonicity_check,
    nucleus_closed,
    transport_problem,
)
from src.cuts.sequence import (
    CutRecord,
    CutSequence,
    apply_cut,
    apply_sequence,
    intersect_in_family,
    is_valid_cut,
)

__all__ = [
    "CutRecord",
    "CutSequence",
    "NucleusResult",
    "apply_cut",
    "apply_sequence",
    "approximate_nucleus",
    "intersect_in_family",
    "is_valid_cut",
    "monotonicity_check",
    "nucleus_closed",
    "transport_problem",
]
