"""Hartogs figures and spherical hat pairs."""

from src.hats.family import HatFamily, enumerate_candidates, generate_family
from src.hats.figures import HartogsFigure, hartogs_membership
from src.hats.pairs import HatPair, HatRegion, axis_unitary, hat_membership
from src.hats.sampling import sample_enlarged, sample_filled, sample_S
from src.hats.voxelize import HatVoxels, mark_cells, valid_in_ambient, voxelize_hat

__all__ = [
    "HartogsFigure",
    "HatFamily",
    "HatPair",
    "HatRegion",
    "HatVoxels",
    "axis_unitary",
    "enumerate_candidates",
    "generate_family",
    "hartogs_membership",
    "hat_membership",
    "mark_cells",
    "sample_S",
    "sample_enlarged",
    "sample_filled",
    "valid_in_ambient",
    "voxelize_hat",
]
