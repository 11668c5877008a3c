"""Voxel sets over a chart box: voxelization, set algebra, morphology, RLE codec."""

import itertools
from collections.abc import Callable
from dataclasses import dataclass
from enum import StrEnum

import numpy as np
from scipy import ndimage

from src.core.geometry import ChartBox, as_points
from src.errors import BoxMismatchError, InputError

type PointPredicate = Callable[[np.ndarray], np.ndarray]


class VoxelizeMode(StrEnum):
    """How a predicate marks a cell."""

    CENTERS = "centers"
    CONSERVATIVE = "conservative"


class SetOp(StrEnum):
    UNION = "union"
    INTERSECTION = "intersection"
    DIFFERENCE = "difference"
    SUBSET_TEST = "subset_test"


@dataclass(frozen=True, eq=False)
class VoxelSet:
    """Boolean occupancy over the cells of a chart box.

    The occupancy array has shape box.resolution and is read-only.
    """

    box: ChartBox
    occupancy: np.ndarray

    def __post_init__(self) -> None:
        occupancy = np.array(self.occupancy, dtype=bool)
        if occupancy.shape != self.box.shape:
            raise InputError(
                f"occupancy shape {occupancy.shape} does not match resolution {self.box.shape}"
            )
        occupancy.setflags(write=False)
        object.__setattr__(self, "occupancy", occupancy)

    @classmethod
    def empty(cls, box: ChartBox) -> "VoxelSet":
        return cls(box, np.zeros(box.shape, dtype=bool))

    @classmethod
    def full(cls, box: ChartBox) -> "VoxelSet":
        return cls(box, np.ones(box.shape, dtype=bool))

    @classmethod
    def from_points(cls, box: ChartBox, points: np.ndarray) -> "VoxelSet":
        """Mark every cell containing at least one point; points off the box are ignored."""
        occupancy = np.zeros(box.shape, dtype=bool)
        if len(points):
            indices, inside = box.index_of(points)
            occupancy[tuple(indices[inside].T)] = True
        return cls(box, occupancy)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, VoxelSet):
            return NotImplemented
        return self.box == other.box and bool(np.array_equal(self.occupancy, other.occupancy))

    def __hash__(self) -> int:
        return hash((self.box, self.occupancy.tobytes()))

    def __len__(self) -> int:
        return self.count

    def __repr__(self) -> str:
        return f"VoxelSet(count={self.count}, resolution={self.box.resolution})"

    @property
    def count(self) -> int:
        return int(np.count_nonzero(self.occupancy))

    def is_empty(self) -> bool:
        return not self.occupancy.any()

    def indices(self) -> np.ndarray:
        """Occupied cell indices, shape (count, 2n), in C order."""
        return np.argwhere(self.occupancy)

    def centers(self) -> np.ndarray:
        """Centers of occupied cells, shape (count, 2n), in C order."""
        idx = self.indices()
        coords = [self.box.axis_centers(a)[idx[:, a]] for a in range(self.box.ndim)]
        return np.stack(coords, axis=-1) if len(idx) else np.empty((0, self.box.ndim))

    def contains_points(self, points: np.ndarray) -> np.ndarray:
        """Mask of points whose cell is occupied."""
        indices, inside = self.box.index_of(points)
        hit = self.occupancy[tuple(indices.T)]
        return hit & inside

    def _check(self, other: "VoxelSet") -> None:
        if self.box != other.box:
            raise BoxMismatchError(f"boxes differ: {self.box} vs {other.box}")

    def union(self, other: "VoxelSet") -> "VoxelSet":
        self._check(other)
        return VoxelSet(self.box, self.occupancy | other.occupancy)

    def intersection(self, other: "VoxelSet") -> "VoxelSet":
        self._check(other)
        return VoxelSet(self.box, self.occupancy & other.occupancy)

    def difference(self, other: "VoxelSet") -> "VoxelSet":
        self._check(other)
        return VoxelSet(self.box, self.occupancy & ~other.occupancy)

    def issubset(self, other: "VoxelSet") -> bool:
        self._check(other)
        return not np.any(self.occupancy & ~other.occupancy)

    def isdisjoint(self, other: "VoxelSet") -> bool:
        self._check(other)
        return not np.any(self.occupancy & other.occupancy)

    __or__ = union
    __and__ = intersection
    __sub__ = difference
    __le__ = issubset

    def dilate(self, iterations: int = 1) -> "VoxelSet":
        """Grow by whole cells, counting every cell sharing a corner as a neighbor."""
        if iterations < 1 or self.is_empty():
            return self
        grown = ndimage.binary_dilation(
            self.occupancy, structure=_structure(self.box.ndim, full=True), iterations=iterations
        )
        return VoxelSet(self.box, grown)

    def erode(self, iterations: int = 1) -> "VoxelSet":
        """Shrink by whole cells; cells outside the box count as unoccupied."""
        if iterations < 1 or self.is_empty():
            return self
        shrunk = ndimage.binary_erosion(
            self.occupancy,
            structure=_structure(self.box.ndim, full=True),
            iterations=iterations,
            border_value=0,
        )
        return VoxelSet(self.box, shrunk)

    def interior(self) -> "VoxelSet":
        """Occupied cells whose face neighbors are all occupied."""
        return self.difference(boundary(self))


def _structure(ndim: int, full: bool) -> np.ndarray:
    return ndimage.generate_binary_structure(ndim, ndim if full else 1)


def voxelize(
    predicate: PointPredicate,
    box: ChartBox,
    mode: VoxelizeMode | str = VoxelizeMode.CENTERS,
    window: tuple[slice, ...] | None = None,
) -> VoxelSet:
    """Mark the cells of a box that satisfy a vectorized predicate.

    Args:
        predicate (PointPredicate): Maps an (N, 2n) batch to an (N,) bool mask
        box (ChartBox): Grid to voxelize on
        mode (VoxelizeMode | str, optional): CENTERS tests the cell center; CONSERVATIVE
            additionally requires all 2^{2n} cell corners. Defaults to CENTERS.
        window (tuple[slice, ...] | None, optional): Restrict evaluation to these cells;
            everything outside is left unoccupied. Defaults to the whole box.

    Returns:
        VoxelSet: The marked cells
    """
    mode = VoxelizeMode(mode)
    window = window or box.full_window()
    local_shape = tuple(s.stop - s.start for s in window)
    marked = np.asarray(predicate(box.centers(window)), dtype=bool).reshape(local_shape)
    if mode is VoxelizeMode.CONSERVATIVE and marked.any():
        nodes = box.nodes(window)
        node_shape = nodes.shape[:-1]
        node_mask = np.asarray(predicate(nodes.reshape(-1, box.ndim)), dtype=bool)
        node_mask = node_mask.reshape(node_shape)
        for corner in itertools.product((0, 1), repeat=box.ndim):
            view = tuple(slice(c, c + size) for c, size in zip(corner, local_shape, strict=True))
            marked &= node_mask[view]
    occupancy = np.zeros(box.shape, dtype=bool)
    occupancy[window] = marked
    return VoxelSet(box, occupancy)


def boundary(voxels: VoxelSet) -> VoxelSet:
    """Occupied cells with a face neighbor that is unoccupied or outside the box."""
    if voxels.is_empty():
        return voxels
    inner = ndimage.binary_erosion(
        voxels.occupancy, structure=_structure(voxels.box.ndim, full=False), border_value=0
    )
    return VoxelSet(voxels.box, voxels.occupancy & ~inner)


def set_ops(a: VoxelSet, b: VoxelSet, op: SetOp | str) -> VoxelSet | bool:
    """Bitwise set algebra between voxel sets sharing one box.

    Raises:
        BoxMismatchError: If the boxes differ
    """
    match SetOp(op):
        case SetOp.UNION:
            return a.union(b)
        case SetOp.INTERSECTION:
            return a.intersection(b)
        case SetOp.DIFFERENCE:
            return a.difference(b)
        case SetOp.SUBSET_TEST:
            return a.issubset(b)


def encode_runs(occupancy: np.ndarray) -> list[int]:
    """Run-length encode a grid with axis 0 varying fastest.

    Runs alternate unoccupied/occupied and always start with an unoccupied run,
    which is zero when the first cell is occupied.
    """
    flat = np.asarray(occupancy, dtype=bool).reshape(-1, order="F")
    if flat.size == 0:
        return []
    change = np.flatnonzero(flat[1:] != flat[:-1]) + 1
    edges = np.concatenate(([0], change, [flat.size]))
    runs = np.diff(edges).tolist()
    if flat[0]:
        runs.insert(0, 0)
    return [int(r) for r in runs]


def decode_runs(runs: list[int], shape: tuple[int, ...]) -> np.ndarray:
    """Inverse of encode_runs."""
    if any(r < 0 for r in runs):
        raise InputError("run lengths must be nonnegative")
    total = int(np.prod(shape))
    if sum(runs) != total:
        raise InputError(f"runs cover {sum(runs)} cells, grid has {total}")
    values = np.arange(len(runs)) % 2 == 1
    flat = np.repeat(values, runs)
    return flat.reshape(shape, order="F")


def cells_within(box: ChartBox, inner: ChartBox) -> VoxelSet:
    """Cells of box lying entirely inside the closed inner box."""
    lo = np.array(inner.lower)
    hi = np.array(inner.upper)

    def inside(points: np.ndarray) -> np.ndarray:
        points = as_points(points, box.ndim)
        return np.all((points >= lo) & (points <= hi), axis=-1)

    return voxelize(inside, box, VoxelizeMode.CONSERVATIVE)
