"""Open test domains given by exact membership predicates."""

from dataclasses import dataclass

import numpy as np

from src.core.ambient import AmbientDomain
from src.core.geometry import ChartBox, as_points, to_complex
from src.core.voxels import PointPredicate, VoxelizeMode, VoxelSet, voxelize


@dataclass(frozen=True)
class DomainSpec:
    """An open set Omega with a pure membership predicate on real-layout points."""

    name: str
    predicate: PointPredicate

    def contains(self, points: np.ndarray) -> np.ndarray:
        return np.asarray(self.predicate(as_points(points)), dtype=bool)

    def voxelize(self, box: ChartBox) -> VoxelSet:
        """Cells whose centers lie in Omega."""
        return voxelize(self.predicate, box, VoxelizeMode.CENTERS)

    def as_ambient(self, box: ChartBox) -> AmbientDomain:
        return AmbientDomain.from_predicate(box, self.predicate)

    @classmethod
    def everything(cls) -> "DomainSpec":
        return cls("everything", lambda points: np.ones(len(as_points(points)), dtype=bool))

    @classmethod
    def ball(cls, radius: float, center: np.ndarray | None = None) -> "DomainSpec":
        """Open ball B(center, radius)."""
        return cls(f"ball({radius:g})", _distance_test(radius, center, inside=True))

    @classmethod
    def ball_complement(cls, radius: float, center: np.ndarray | None = None) -> "DomainSpec":
        """C^n minus the closed ball of the given radius."""
        return cls(f"complement_ball({radius:g})", _distance_test(radius, center, inside=False))

    @classmethod
    def polydisc(cls, radius: float) -> "DomainSpec":
        def inside(points: np.ndarray) -> np.ndarray:
            return np.all(np.abs(to_complex(as_points(points))) < radius, axis=1)

        return cls(f"polydisc({radius:g})", inside)


def _distance_test(radius: float, center: np.ndarray | None, inside: bool) -> PointPredicate:
    def test(points: np.ndarray) -> np.ndarray:
        points = as_points(points)
        offset = points if center is None else points - np.asarray(center, dtype=float)
        distance = np.linalg.norm(offset, axis=1)
        return distance < radius if inside else distance > radius

    return test
