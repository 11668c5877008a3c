"""Chart geometry, voxel sets and scalar fields."""

from src.core.ambient import AmbientDomain
from src.core.fields import MaxField, ScalarField
from src.core.geometry import AffineMap, ChartBox, CPoint, GridSymmetry, cpoint
from src.core.voxels import SetOp, VoxelizeMode, VoxelSet, boundary, set_ops, voxelize

__all__ = [
    "AffineMap",
    "AmbientDomain",
    "ChartBox",
    "CPoint",
    "GridSymmetry",
    "MaxField",
    "ScalarField",
    "SetOp",
    "VoxelSet",
    "VoxelizeMode",
    "boundary",
    "cpoint",
    "set_ops",
    "voxelize",
]
