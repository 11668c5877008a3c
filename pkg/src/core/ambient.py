"""The ambient manifold restricted to one chart box."""

from dataclasses import dataclass

import numpy as np

from src.core.geometry import ChartBox, GridSymmetry, as_points
from src.core.voxels import PointPredicate, VoxelSet, VoxelizeMode, voxelize
from src.errors import InputError


@dataclass(frozen=True)
class AmbientDomain:
    """Allowed cells of a chart box, with an optional exact membership predicate.

    Cells outside `allowed` are treated as not belonging to the manifold. When a
    predicate is given, `allowed` is its conservative voxelization.
    """

    box: ChartBox
    allowed: VoxelSet
    predicate: PointPredicate | None = None
    compact: bool = False

    def __post_init__(self) -> None:
        if self.allowed.box != self.box:
            raise InputError("allowed voxels must live on the ambient box")

    @classmethod
    def full(cls, box: ChartBox) -> "AmbientDomain":
        return cls(box, VoxelSet.full(box))

    @classmethod
    def from_predicate(cls, box: ChartBox, predicate: PointPredicate) -> "AmbientDomain":
        return cls(box, voxelize(predicate, box, VoxelizeMode.CONSERVATIVE), predicate)

    @property
    def is_full(self) -> bool:
        return self.allowed.count == self.box.size

    def contains(self, points: np.ndarray) -> np.ndarray:
        """Membership of points: inside the box, in an allowed cell, and the predicate."""
        points = as_points(points, self.box.ndim)
        inside = self.box.contains(points)
        if self.predicate is not None:
            inside &= np.asarray(self.predicate(points), dtype=bool)
        if not self.is_full:
            inside &= self.allowed.contains_points(points)
        return inside

    def transported(self, symmetry: GridSymmetry) -> "AmbientDomain":
        """Image of the ambient under a grid symmetry of a symmetric box."""
        if not self.box.is_symmetric():
            raise InputError("grid symmetries need a cube centered at the origin")
        inverse = symmetry.affine_map().inverse()
        predicate = self.predicate
        moved = VoxelSet(self.box, symmetry.apply_to_array(self.allowed.occupancy))
        if predicate is None:
            return AmbientDomain(self.box, moved, None, self.compact)
        return AmbientDomain(
            self.box, moved, lambda points: predicate(inverse.forward(points)), self.compact
        )
