"""Shared pytest fixtures."""

import numpy as np
import pytest

from src.core.ambient import AmbientDomain
from src.core.geometry import AffineMap, ChartBox
from src.core.voxels import VoxelSet, voxelize
from src.hats.pairs import HatPair


def disc(center: tuple[float, float], radius: float):
    """Closed disc predicate in C^1."""
    c = np.asarray(center, dtype=float)
    return lambda points: np.linalg.norm(points - c, axis=1) <= radius


@pytest.fixture
def plane_box() -> ChartBox:
    """Create a 40 x 40 grid on [-2, 2]^2, a chart of C^1."""
    return ChartBox.cube(1, 2.0, 40)


@pytest.fixture
def plane_ambient(plane_box: ChartBox) -> AmbientDomain:
    """Create the full ambient on the plane box."""
    return AmbientDomain.full(plane_box)


@pytest.fixture
def small_disc(plane_box: ChartBox) -> VoxelSet:
    """Create the disc of radius 0.5 around the origin."""
    return voxelize(disc((0.0, 0.0), 0.5), plane_box)


@pytest.fixture
def two_discs(plane_box: ChartBox) -> VoxelSet:
    """Create two small discs at x = 0.6 and x = -0.6."""
    right = voxelize(disc((0.6, 0.0), 0.1), plane_box)
    left = voxelize(disc((-0.6, 0.0), 0.1), plane_box)
    return right | left


@pytest.fixture
def right_cap() -> HatPair:
    """Create the unit hat of order 1 in C^1 opening towards +x, r = 0.2."""
    return HatPair(1, 0.2, AffineMap.identity(1), label="right")


@pytest.fixture
def left_cap() -> HatPair:
    """Create the unit hat of order 1 in C^1 opening towards -x, r = 0.2."""
    flip = AffineMap(np.array([[-1.0]]), np.zeros(1))
    return HatPair(1, 0.2, flip, label="left")


@pytest.fixture
def wide_cap() -> HatPair:
    """Create a hat centered at 1 with scale 1.9 opening towards -x, r = 0.1."""
    embedding = AffineMap.similarity(np.array([[-1.0]]), 1.9, np.array([1.0]))
    return HatPair(1, 0.1, embedding, label="wide")


@pytest.fixture
def ball_pair() -> HatPair:
    """Create the identity hat pair of order 2 in C^2, r = 0.5."""
    return HatPair(2, 0.5, AffineMap.identity(2), label="identity")
