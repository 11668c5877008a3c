"""Voxel renderings of hat pairs and their validity inside an ambient domain."""

import itertools
import logging
from enum import StrEnum
from functools import partial

import numpy as np

from src.core.ambient import AmbientDomain
from src.core.geometry import ChartBox
from src.core.voxels import VoxelizeMode, VoxelSet, voxelize
from src.hats.pairs import HatPair
from src.hats.sampling import sample_enlarged

logger = logging.getLogger(__name__)

VALIDITY_SAMPLES = 512


class HatVoxels(StrEnum):
    """Which voxel rendering of a hat pair to build."""

    S_DILATED = "S_dilated"
    FILLED = "filled"
    INTERIOR_CONSERVATIVE = "interior_conservative"


def _reach(box: ChartBox, which: HatVoxels) -> float:
    """Distance from the filled hat beyond which a cell can never be marked."""
    if which is HatVoxels.S_DILATED:
        return box.diagonal + box.half_diagonal
    return box.half_diagonal


def _surface_near(pair: HatPair, box: ChartBox, centers: np.ndarray) -> np.ndarray:
    # a cell meets the diagonal-dilation of S iff its center is within 1.5 diagonals
    return pair.surface_distance(centers) <= box.diagonal + box.half_diagonal


def hat_window(pair: HatPair, box: ChartBox, which: HatVoxels | str) -> tuple[slice, ...] | None:
    """Index window covering every cell a rendering can mark, or None if it misses the box."""
    lower, upper = pair.bounds(1.0, _reach(box, HatVoxels(which)))
    return box.window(lower, upper)


def voxelize_hat(pair: HatPair, box: ChartBox, which: HatVoxels | str) -> VoxelSet:
    """Render a hat pair on a box.

    Args:
        pair (HatPair): Hat pair to render
        box (ChartBox): Target grid
        which (HatVoxels | str): S_dilated marks cells meeting the one-diagonal dilation
            of S (superset); filled marks cells whose center lies in the filled hat;
            interior_conservative marks cells lying entirely in the open filled hat (subset)

    Returns:
        VoxelSet: Marked cells
    """
    which = HatVoxels(which)
    window = hat_window(pair, box, which)
    if window is None:
        return VoxelSet.empty(box)
    match which:
        case HatVoxels.S_DILATED:
            near = partial(_surface_near, pair, box)
            return voxelize(near, box, VoxelizeMode.CENTERS, window)
        case HatVoxels.FILLED:
            return voxelize(pair.in_filled, box, VoxelizeMode.CENTERS, window)
        case HatVoxels.INTERIOR_CONSERVATIVE:
            return voxelize(pair.in_interior, box, VoxelizeMode.CONSERVATIVE, window)


def mark_cells(pair: HatPair, which: HatVoxels | str, cells: VoxelSet) -> VoxelSet:
    """Same marking as voxelize_hat, evaluated only on the occupied cells of `cells`.

    The interior test checks every corner of each cell; the filled hat is convex, so a
    cell whose corners are all interior lies in the interior.
    """
    which = HatVoxels(which)
    box = cells.box
    lower, upper = pair.bounds(1.0, _reach(box, which))
    idx = cells.indices()
    if len(idx):
        centers = cells.centers()
        near = np.all((centers >= lower) & (centers <= upper), axis=1)
        idx, centers = idx[near], centers[near]
    if not len(idx):
        return VoxelSet.empty(box)
    match which:
        case HatVoxels.S_DILATED:
            hit = _surface_near(pair, box, centers)
        case HatVoxels.FILLED:
            hit = pair.in_filled(centers)
        case HatVoxels.INTERIOR_CONSERVATIVE:
            hit = pair.in_interior(centers)
            half = box.widths / 2.0
            for signs in itertools.product((-1.0, 1.0), repeat=box.ndim):
                if not hit.any():
                    break
                hit &= pair.in_interior(centers + np.asarray(signs) * half)
    occupancy = np.zeros(box.shape, dtype=bool)
    occupancy[tuple(idx[hit].T)] = True
    return VoxelSet(box, occupancy)


def valid_in_ambient(
    pair: HatPair, ambient: AmbientDomain, samples: int = VALIDITY_SAMPLES, seed: int = 0
) -> bool:
    """Whether the (1 + mu)-enlarged filled hat fits inside the ambient's allowed region.

    The enlarged region must lie in the box (exact support-function bounds), its samples
    must satisfy the ambient, and every cell it can meet must be allowed.
    """
    box = ambient.box
    scale = 1.0 + pair.mu
    lower, upper = pair.bounds(scale)
    if np.any(lower < np.array(box.lower)) or np.any(upper > np.array(box.upper)):
        return False
    if ambient.is_full and ambient.predicate is None:
        return True
    if not ambient.contains(sample_enlarged(pair, samples, seed)).all():
        return False
    window = box.window(lower - box.half_diagonal, upper + box.half_diagonal)
    if window is None:
        return False
    centers = box.centers(window)
    meets = pair.filled_distance(centers, scale) <= box.half_diagonal
    allowed = ambient.allowed.occupancy[window].reshape(-1)
    return bool(np.all(allowed[meets]))
