"""Functions with corners as trees of scaled bumps joined by max-gluing."""

from dataclasses import dataclass

import numpy as np

from src.core.fields import MaxField, ScalarField
from src.core.geometry import as_points
from src.core.voxels import VoxelSet
from src.errors import DomainError
from src.hats.pairs import HatPair


@dataclass(frozen=True, eq=False)
class Leaf:
    """scale * branch on the open piece `support`, with the step and hat that produced it."""

    branch: ScalarField
    scale: float
    support: VoxelSet
    step: int = 0
    hat: HatPair | None = None

    @property
    def W(self) -> VoxelSet:
        return self.support

    @property
    def field(self) -> ScalarField:
        return self.branch if self.scale == 1.0 else self.branch.scaled(self.scale)


@dataclass(frozen=True, eq=False)
class MaxNode:
    """first on V1 \\ V2, second on V2 \\ V1, their maximum on V1 ∩ V2; defined on W."""

    first: "ConstructedFunction"
    second: "ConstructedFunction"
    V1: VoxelSet
    V2: VoxelSet
    W: VoxelSet
    step: int = 0


type ConstructedFunction = Leaf | MaxNode


def _values(f: ConstructedFunction, points: np.ndarray) -> np.ndarray:
    if isinstance(f, Leaf):
        return f.scale * f.branch.evaluate(points)
    in1 = f.V1.contains_points(points)
    in2 = f.V2.contains_points(points)
    if not np.all(in1 | in2):
        bad = points[np.argmin(in1 | in2)]
        raise DomainError(f"point {bad.tolist()} lies in neither glued piece")
    out = np.full(len(points), -np.inf)
    if in1.any():
        out[in1] = _values(f.first, points[in1])
    if in2.any():
        out[in2] = np.maximum(out[in2], _values(f.second, points[in2]))
    return out


def evaluate_constructed(f: ConstructedFunction, points: np.ndarray) -> np.ndarray:
    """Evaluate the tree, picking the clause of every node by voxel membership.

    Raises:
        DomainError: If a point's voxel is outside W or a leaf is undefined there
    """
    points = as_points(points, f.W.box.ndim)
    inside = f.W.contains_points(points)
    if not inside.all():
        bad = points[np.argmin(inside)]
        raise DomainError(f"point {bad.tolist()} lies outside the neighborhood W")
    return _values(f, points)


def leaves(f: ConstructedFunction) -> list[Leaf]:
    """Leaves in construction order: the first-glued bump comes last."""
    if isinstance(f, Leaf):
        return [f]
    return leaves(f.first) + leaves(f.second)


def reached_leaves(f: ConstructedFunction, point: np.ndarray) -> list[Leaf]:
    """Leaves whose values enter the maximum at one point."""
    if isinstance(f, Leaf):
        return [f]
    found: list[Leaf] = []
    if f.V1.contains_points(point)[0]:
        found += reached_leaves(f.first, point)
    if f.V2.contains_points(point)[0]:
        found += reached_leaves(f.second, point)
    return found


def local_max_field(f: ConstructedFunction, point: np.ndarray) -> MaxField:
    """The function near a point as a max of the scaled leaves reaching it."""
    reached = reached_leaves(f, point)
    if not reached:
        raise DomainError(f"no leaf reaches {np.ravel(point).tolist()}")
    return MaxField.of([leaf.field for leaf in reached], name="constructed")


def negated(f: ConstructedFunction) -> ConstructedFunction:
    """The same tree with every leaf scale flipped in sign."""
    if isinstance(f, Leaf):
        return Leaf(f.branch, -f.scale, f.support, f.step, f.hat)
    return MaxNode(negated(f.first), negated(f.second), f.V1, f.V2, f.W, f.step)
