"""Tests for voxel sets and the ambient domain."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis.extra.numpy import arrays

from src.core.ambient import AmbientDomain
from src.core.geometry import ChartBox, GridSymmetry, cpoint
from src.core.voxels import (
    SetOp,
    VoxelizeMode,
    VoxelSet,
    boundary,
    cells_within,
    decode_runs,
    encode_runs,
    set_ops,
    voxelize,
)
from src.errors import BoxMismatchError, InputError
from tests.conftest import disc


@pytest.fixture
def coarse_box():
    """Create a 4 x 4 grid on [-1, 1]^2."""
    return ChartBox.cube(1, 1.0, 4)


class TestVoxelize:
    """Tests for voxelize."""

    def test_centers_mode(self, coarse_box):
        """Only the four inner cell centers lie within 0.5 of the origin."""
        voxels = voxelize(disc((0.0, 0.0), 0.5), coarse_box)
        assert voxels.count == 4

    def test_conservative_needs_every_corner(self, coarse_box):
        """Conservative mode drops cells whose far corner leaves the region."""
        assert voxelize(disc((0.0, 0.0), 0.5), coarse_box, VoxelizeMode.CONSERVATIVE).is_empty()
        assert voxelize(disc((0.0, 0.0), 0.8), coarse_box, "conservative").count == 4

    def test_window_limits_evaluation(self, coarse_box):
        """Cells outside the window stay unoccupied."""
        window = (slice(0, 2), slice(0, 4))
        voxels = voxelize(lambda p: np.ones(len(p), dtype=bool), coarse_box, window=window)
        assert voxels.count == 8
        assert voxels.occupancy[:2].all()

    def test_occupancy_shape_is_checked(self, coarse_box):
        """The occupancy grid must match the box resolution."""
        with pytest.raises(InputError):
            VoxelSet(coarse_box, np.zeros((3, 3), dtype=bool))

    def test_occupancy_is_read_only(self, coarse_box):
        """Voxel sets are immutable."""
        voxels = VoxelSet.full(coarse_box)
        with pytest.raises(ValueError):
            voxels.occupancy[0, 0] = False


class TestSetAlgebra:
    """Tests for set operations."""

    def test_operations(self, coarse_box):
        """Union, intersection, difference and subset agree with the occupancy arrays."""
        left = voxelize(lambda p: p[:, 0] < 0, coarse_box)
        lower = voxelize(lambda p: p[:, 1] < 0, coarse_box)
        assert set_ops(left, lower, SetOp.UNION).count == 12
        assert set_ops(left, lower, "intersection").count == 4
        assert (left - lower).count == 4
        assert set_ops(left & lower, left, SetOp.SUBSET_TEST) is True
        assert not left <= lower

    def test_box_mismatch(self, coarse_box):
        """Sets on different boxes cannot be combined."""
        other = VoxelSet.full(ChartBox.cube(1, 1.0, 8))
        with pytest.raises(BoxMismatchError):
            VoxelSet.full(coarse_box) | other

    def test_contains_points(self, coarse_box):
        """Points are members when their cell is occupied and they lie on the box."""
        voxels = voxelize(lambda p: p[:, 0] > 0, coarse_box)
        mask = voxels.contains_points(np.array([[0.3, 0.3], [-0.3, 0.3], [3.0, 0.0]]))
        np.testing.assert_array_equal(mask, [True, False, False])

    def test_from_points_ignores_points_off_the_box(self, coarse_box):
        """Points outside the box mark nothing."""
        voxels = VoxelSet.from_points(coarse_box, np.array([[0.1, 0.1], [5.0, 5.0]]))
        assert voxels.count == 1


class TestMorphology:
    """Tests for boundary, dilation and erosion."""

    def test_boundary_of_full_grid(self, coarse_box):
        """Every edge cell of a full grid is a boundary cell."""
        full = VoxelSet.full(coarse_box)
        assert boundary(full).count == 12
        assert full.interior().count == 4

    def test_dilate_then_erode_single_cell(self, coarse_box):
        """A single cell dilates to its 3 x 3 neighborhood and erodes back."""
        occupancy = np.zeros(coarse_box.shape, dtype=bool)
        occupancy[1, 1] = True
        cell = VoxelSet(coarse_box, occupancy)
        grown = cell.dilate()
        assert grown.count == 9
        assert grown.erode() == cell

    def test_erode_treats_outside_as_empty(self, coarse_box):
        """Cells on the edge of the box erode away."""
        assert VoxelSet.full(coarse_box).erode().count == 4

    def test_zero_iterations_is_identity(self, coarse_box):
        """Morphology with no iterations returns the set unchanged."""
        voxels = VoxelSet.full(coarse_box)
        assert voxels.dilate(0) is voxels
        assert voxels.erode(0) is voxels

    def test_cells_within(self, coarse_box):
        """Only cells entirely inside the inner box are kept."""
        inner = ChartBox((-0.5, -0.5), (0.5, 0.5), (1, 1))
        assert cells_within(coarse_box, inner).count == 4


class TestRunLengthCodec:
    """Tests for encode_runs and decode_runs."""

    def test_first_run_is_unoccupied(self):
        """Axis 0 varies fastest and a leading occupied cell gives a zero run."""
        occupancy = np.array([[True, False], [False, True]])
        assert encode_runs(occupancy) == [0, 1, 2, 1]

    def test_empty_grid(self):
        """An empty grid has no runs."""
        assert encode_runs(np.zeros((0, 2), dtype=bool)) == []

    @pytest.mark.parametrize("runs", [[1, 2], [5, 1], [-1, 5]])
    def test_decode_rejects_bad_runs(self, runs):
        """Runs must be nonnegative and cover the grid exactly."""
        with pytest.raises(InputError):
            decode_runs(runs, (2, 2))

    @settings(max_examples=50, deadline=None)
    @given(arrays(bool, (3, 4)))
    def test_codec_inverts(self, occupancy):
        """Decoding the runs of a grid restores it."""
        np.testing.assert_array_equal(decode_runs(encode_runs(occupancy), (3, 4)), occupancy)


class TestAmbientDomain:
    """Tests for AmbientDomain."""

    def test_full(self, coarse_box):
        """The full ambient admits every point of the box."""
        ambient = AmbientDomain.full(coarse_box)
        assert ambient.is_full
        assert ambient.contains(np.array([[0.9, -0.9], [1.5, 0.0]])).tolist() == [True, False]

    def test_allowed_must_share_box(self, coarse_box):
        """Allowed cells must live on the ambient box."""
        with pytest.raises(InputError):
            AmbientDomain(coarse_box, VoxelSet.full(ChartBox.cube(1, 1.0, 8)))

    def test_transported_follows_the_symmetry(self):
        """A quarter turn moves a disc around (0.5, 0) to one around (0, 0.5)."""
        box = ChartBox.cube(1, 1.0, 20)
        ambient = AmbientDomain.from_predicate(box, disc((0.5, 0.0), 0.4))
        moved = ambient.transported(GridSymmetry((0,), (1,)))
        assert moved.contains(cpoint(0.05 + 0.55j))[0]
        assert not moved.contains(cpoint(0.55 + 0.05j))[0]

    def test_transport_needs_symmetric_box(self):
        """Grid symmetries only act on origin-centered cubes."""
        box = ChartBox.cube(1, 1.0, 4, center=0.5)
        with pytest.raises(InputError):
            AmbientDomain.full(box).transported(GridSymmetry((0,), (1,)))
