"""Tests for spherical cuts and the q-nucleus."""

from functools import cache

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from src.core.ambient import AmbientDomain
from src.core.geometry import AffineMap, ChartBox, GridSymmetry
from src.core.voxels import VoxelSet, voxelize
from src.cuts.nucleus import (
    approximate_nucleus,
    exhaustion,
    monotonicity_check,
    nucleus_closed,
    nucleus_of_compact_ambient,
    transport_problem,
)
from src.cuts.sequence import (
    CutSequence,
    apply_cut,
    apply_sequence,
    cut,
    intersect_in_family,
    is_valid_cut,
)
from src.errors import BoxMismatchError, InputError, InvalidCutError, OrderError
from src.hats.family import HatFamily, generate_family
from src.hats.pairs import HatPair
from src.scenes.scene import scene
from tests.conftest import disc


@pytest.fixture
def right_disc(plane_box):
    """Create the disc of radius 0.1 at x = 0.6."""
    return voxelize(disc((0.6, 0.0), 0.1), plane_box)


@pytest.fixture
def annulus(plane_box):
    """Create the annulus 0.9 <= |z| <= 1.1, which the unit sphere crosses."""

    def ring(points):
        radius = np.linalg.norm(points, axis=1)
        return (radius >= 0.9) & (radius <= 1.1)

    return voxelize(ring, plane_box)


@cache
def _plane_problem() -> tuple[VoxelSet, AmbientDomain, tuple[HatPair, ...]]:
    """Two discs plus a ring crossing the unit circle, with the generated plane family."""
    box = ChartBox.cube(1, 2.0, 40)
    ambient = AmbientDomain.full(box)

    def ring(points):
        radius = np.linalg.norm(points, axis=1)
        return (radius >= 1.2) & (radius <= 1.4)

    K = voxelize(disc((0.6, 0.0), 0.1), box) | voxelize(disc((-0.6, 0.0), 0.1), box)
    K = K | voxelize(ring, box)
    return K, ambient, tuple(generate_family(HatFamily(), ambient))


class TestApplyCut:
    """Tests for single cuts."""

    def test_removes_the_covered_disc(self, two_discs, right_disc, right_cap, plane_ambient):
        """The right cap removes the right disc and nothing else."""
        record = apply_cut(two_discs, right_cap, plane_ambient)
        assert record.removed_count == right_disc.count == 4
        assert record.after == two_discs - right_disc
        assert record.before == two_discs

    def test_one_wide_cut_empties_the_disc(self, small_disc, wide_cap, plane_ambient):
        """A cap whose interior contains the whole disc removes it."""
        record = apply_cut(small_disc, wide_cap, plane_ambient)
        assert record.after.is_empty()
        assert record.removed_count == small_disc.count

    def test_surface_crossing_the_set_is_invalid(self, annulus, right_cap, plane_ambient):
        """A cap whose sphere meets the set cannot cut it."""
        assert not is_valid_cut(annulus, right_cap, plane_ambient)
        with pytest.raises(InvalidCutError):
            apply_cut(annulus, right_cap, plane_ambient)

    def test_box_mismatch(self, two_discs, right_cap):
        """K and the ambient must share a box."""
        other = AmbientDomain.full(ChartBox.cube(1, 2.0, 20))
        with pytest.raises(BoxMismatchError):
            is_valid_cut(two_discs, right_cap, other)

    def test_unchecked_cut_removes_interior_anyway(self, annulus, right_cap):
        """cut skips validation; the removed cells are still inside the cap."""
        record = cut(annulus, right_cap)
        assert record.removed_count > 0
        assert right_cap.in_interior(record.before.difference(record.after).centers()).all()


class TestCutSequence:
    """Tests for cut sequences."""

    def test_two_cuts_empty_two_discs(self, two_discs, right_cap, left_cap, plane_ambient):
        """Cutting each disc with its own cap leaves nothing."""
        sequence = apply_sequence(two_discs, [right_cap, left_cap], plane_ambient)
        assert sequence.q == 1
        assert sequence.residual.is_empty()
        assert sequence.removed_total == two_discs.count
        assert sequence.pairs == [right_cap, left_cap]
        assert sequence.skipped == []

    def test_invalid_pairs_are_skipped(self, annulus, right_cap, plane_ambient):
        """Invalid cuts are recorded as skipped, not applied."""
        sequence = apply_sequence(annulus, [right_cap], plane_ambient)
        assert sequence.skipped == [right_cap]
        assert sequence.residual == annulus

    def test_mixed_orders_rejected(self, ball_pair):
        """All pairs of a sequence share one order."""
        box = ChartBox.cube(2, 1.0, 4)
        low = HatPair(1, 0.5, AffineMap.identity(2))
        with pytest.raises(OrderError):
            apply_sequence(VoxelSet.empty(box), [ball_pair, low], AmbientDomain.full(box))

    def test_append_must_continue_chain(self, two_discs, small_disc, wide_cap):
        """A record starting from another set breaks the chain."""
        sequence = CutSequence(two_discs, 1)
        with pytest.raises(InputError):
            sequence.append(cut(small_disc, wide_cap))

    def test_intersect_in_family(self, two_discs, right_cap, left_cap, plane_ambient):
        """Chaining two sequences reaches the intersection of their residuals."""
        first = apply_sequence(two_discs, [right_cap], plane_ambient)
        second = apply_sequence(two_discs, [left_cap], plane_ambient)
        merged = intersect_in_family(first, second)
        assert merged.residual == first.residual & second.residual
        assert merged.residual.is_empty()
        assert len(merged.records) == 2

    def test_intersect_needs_shared_start(self, two_discs, small_disc, right_cap, plane_ambient):
        """Sequences from different sets cannot be chained."""
        first = apply_sequence(two_discs, [right_cap], plane_ambient)
        second = apply_sequence(small_disc, [], plane_ambient)
        with pytest.raises(InputError):
            intersect_in_family(first, second)


class TestApproximateNucleus:
    """Tests for approximate_nucleus."""

    def test_explicit_family(self, two_discs, right_cap, left_cap, plane_ambient):
        """Two productive cuts in one sweep empty the set."""
        result = approximate_nucleus(two_discs, 1, [right_cap, left_cap], plane_ambient)
        assert result.converged
        assert result.residual.is_empty()
        assert result.iterations == 1
        assert result.family_size == 2
        assert result.family_seed is None

    def test_generated_family_empties_disc(self, small_disc, plane_ambient):
        """The default family contains a cap wide enough for the disc."""
        result = approximate_nucleus(small_disc, 1, HatFamily(), plane_ambient)
        assert result.converged
        assert result.residual.is_empty()
        assert result.family_seed == 0

    def test_iteration_cap(self, two_discs, right_cap, plane_ambient):
        """With no sweeps allowed nothing is removed and the run is not converged."""
        result = approximate_nucleus(two_discs, 1, [right_cap], plane_ambient, max_iter=0)
        assert not result.converged
        assert result.residual == two_discs

    def test_empty_set_converges_immediately(self, plane_box, right_cap, plane_ambient):
        """The empty set is its own nucleus."""
        result = approximate_nucleus(VoxelSet.empty(plane_box), 1, [right_cap], plane_ambient)
        assert result.converged
        assert result.iterations == 0

    def test_family_order_must_match(self, two_discs, plane_ambient):
        """A family built for another q is rejected."""
        with pytest.raises(OrderError):
            approximate_nucleus(two_discs, 1, HatFamily(q=2), plane_ambient)

    def test_sweep_order_must_be_permutation(self, two_discs, right_cap, plane_ambient):
        """The sweep order indexes the valid family."""
        with pytest.raises(InputError):
            approximate_nucleus(two_discs, 1, [right_cap], plane_ambient, sweep_order=[1])

    def test_sweep_order_does_not_change_result(
        self, two_discs, right_cap, left_cap, plane_ambient
    ):
        """Both sweep orders reach the same residual here."""
        pairs = [right_cap, left_cap]
        forward = approximate_nucleus(two_discs, 1, pairs, plane_ambient)
        backward = approximate_nucleus(two_discs, 1, pairs, plane_ambient, sweep_order=[1, 0])
        assert forward.residual == backward.residual
        assert backward.sequence.pairs == [left_cap, right_cap]

    @settings(max_examples=10, deadline=None)
    @given(data=st.data())
    def test_random_sweep_orders_reach_the_same_residual(self, data):
        """Any permutation of a generated family leaves the same residual."""
        K, ambient, pairs = _plane_problem()
        reference = approximate_nucleus(K, 1, list(pairs), ambient)
        order = data.draw(st.permutations(range(len(pairs))))
        shuffled = approximate_nucleus(K, 1, list(pairs), ambient, sweep_order=order)
        assert shuffled.residual == reference.residual
        assert shuffled.converged == reference.converged

    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_seeded_orders_agree_in_c2(self, seed):
        """Seeded permutations of a C^2 scene family leave the same residual."""
        built = scene("analytic-tube", 8)
        pairs = generate_family(built.family, built.ambient)
        reference = approximate_nucleus(built.K, 1, pairs, built.ambient)
        order = np.random.default_rng(seed).permutation(len(pairs)).tolist()
        shuffled = approximate_nucleus(built.K, 1, pairs, built.ambient, sweep_order=order)
        assert shuffled.residual == reference.residual


class TestNucleusProperties:
    """Tests for monotonicity, exhaustions and symmetry transport."""

    def test_monotonicity(self, right_disc, two_discs, right_cap, plane_ambient):
        """The residual of a subset stays inside the residual of the superset."""
        verdict = monotonicity_check(right_disc, two_discs, 1, [right_cap], plane_ambient)
        assert verdict.verdict == "pass"
        assert verdict.margins["residual_large"] == 4.0

    def test_monotonicity_needs_subset(self, two_discs, right_disc, right_cap, plane_ambient):
        """K must be a subset of L."""
        with pytest.raises(InputError):
            monotonicity_check(two_discs, right_disc, 1, [right_cap], plane_ambient)

    def test_exhaustion_boxes(self, plane_box):
        """Stages grow geometrically and end at the final box."""
        boxes = exhaustion(plane_box, 3, 2.0)
        assert boxes[-1].upper == plane_box.upper
        assert boxes[0].upper == pytest.approx((0.5, 0.5))
        assert boxes[0].resolution == plane_box.resolution

    @pytest.mark.parametrize("depth,growth", [(0, 2.0), (2, 1.0)])
    def test_exhaustion_rejects_bad_parameters(self, plane_box, depth, growth):
        """Depth must be positive and growth above one."""
        with pytest.raises(InputError):
            exhaustion(plane_box, depth, growth)

    def test_nucleus_closed(self, two_discs, right_cap, left_cap, plane_ambient, plane_box):
        """Every stage of the exhaustion is emptied by the two caps."""
        boxes = exhaustion(plane_box, 2, 1.5)
        union = nucleus_closed(two_discs, 1, [right_cap, left_cap], plane_ambient, boxes)
        assert union.is_empty()

    def test_nucleus_closed_keeps_uncut_stage(self, two_discs, right_cap, plane_ambient, plane_box):
        """Without the left cap the left disc survives once a stage contains it."""
        union = nucleus_closed(
            disc((-0.6, 0.0), 0.1), 1, [right_cap], plane_ambient, exhaustion(plane_box, 2, 1.5)
        )
        assert union == two_discs - voxelize(disc((0.6, 0.0), 0.1), plane_box)

    def test_nucleus_closed_needs_nested_boxes(
        self, two_discs, right_cap, plane_ambient, plane_box
    ):
        """The exhaustion must grow."""
        boxes = list(reversed(exhaustion(plane_box, 2, 1.5)))
        with pytest.raises(InputError):
            nucleus_closed(two_discs, 1, [right_cap], plane_ambient, boxes)

    def test_transport_commutes_with_nucleus(self, two_discs, right_cap, plane_ambient):
        """Moving the problem by a quarter turn moves its residual the same way."""
        symmetry = GridSymmetry((0,), (1,))
        original = approximate_nucleus(two_discs, 1, [right_cap], plane_ambient).residual
        moved_k, moved_ambient, moved_pairs = transport_problem(
            symmetry, two_discs, plane_ambient, [right_cap]
        )
        moved = approximate_nucleus(moved_k, 1, moved_pairs, moved_ambient).residual
        assert moved == VoxelSet(original.box, symmetry.apply_to_array(original.occupancy))
        np.testing.assert_allclose(moved_pairs[0].apex(), [0.0, 1.0], atol=1e-12)

    def test_compact_ambient_is_its_own_nucleus(self, plane_box):
        """A compact ambient returns its allowed cells; other ambients are rejected."""
        ambient = AmbientDomain(plane_box, VoxelSet.full(plane_box), compact=True)
        assert nucleus_of_compact_ambient(ambient) == VoxelSet.full(plane_box)
        with pytest.raises(InputError):
            nucleus_of_compact_ambient(AmbientDomain.full(plane_box))

    @settings(max_examples=20, deadline=None)
    @given(mask=arrays(bool, (40, 40)))
    def test_validity_survives_shrinking(self, mask):
        """A cut valid on K stays valid on every subset of K."""
        K, ambient, pairs = _plane_problem()
        subset = K & VoxelSet(K.box, mask)
        for pair in pairs:
            if is_valid_cut(K, pair, ambient):
                assert is_valid_cut(subset, pair, ambient)

    @pytest.mark.parametrize("seed", [0, 3])
    def test_analytic_curve_survives_every_family(self, seed):
        """Voxels along the curve z2 = z1^2 stay in the residual whatever the family seed."""
        built = scene("analytic-tube", 8)
        family = HatFamily(seed=seed, random_directions=2)
        result = approximate_nucleus(built.K, 1, family, built.ambient)
        assert not built.keep.is_empty()
        assert built.keep.issubset(result.residual)
