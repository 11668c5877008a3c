"""Tests for the containment probes, disc sweeps and maximum principle checks."""

import numpy as np
import pytest

from src.core.geometry import AffineMap, ChartBox, cpoint
from src.core.voxels import voxelize
from src.errors import InputError, OrderError
from src.hats.figures import HartogsFigure
from src.hats.pairs import HatPair
from src.scenes.catalogue import ball_exhaustion, norm_squared, peaked, re_coordinate
from src.verify import (
    DiscFamily,
    DomainSpec,
    disc_family_sweep,
    exhaustion_fill_check,
    hartogs_probe,
    hat_fill_probe,
    local_max_check,
    peak_obstruction,
)

FIGURE = HartogsFigure(1, 1, 0.2, 0.9)


def scaled_pair(scale: float) -> HatPair:
    """Hat of order 2 in C^2 with r = 0.5, scaled about the origin."""
    return HatPair(2, 0.5, AffineMap.similarity(np.eye(2), scale, np.zeros(2)), label="scaled")


class TestDomainSpec:
    """Tests for the test domains."""

    @pytest.mark.parametrize(
        "domain,expected",
        [
            (DomainSpec.everything(), [True, True]),
            (DomainSpec.ball(1.0), [True, False]),
            (DomainSpec.ball_complement(1.0), [False, True]),
            (DomainSpec.polydisc(0.8), [True, False]),
        ],
    )
    def test_membership(self, domain, expected):
        """The predicates are open and act on real-layout points."""
        points = np.concatenate([cpoint(0.5, 0.5j), cpoint(0.9, 0.9)])
        assert domain.contains(points).tolist() == expected

    def test_ball_boundary_is_excluded(self):
        """Neither the ball nor its complement contains the sphere."""
        sphere = cpoint(1.0, 0)
        assert not DomainSpec.ball(1.0).contains(sphere)[0]
        assert not DomainSpec.ball_complement(1.0).contains(sphere)[0]

    def test_voxelize_uses_centers(self):
        """Cells whose centers lie in the domain are kept."""
        voxels = DomainSpec.ball(0.5).voxelize(ChartBox.cube(1, 1.0, 4))
        assert voxels.count == 4


class TestHatFillProbe:
    """Tests for hat_fill_probe."""

    def test_violation(self):
        """A hat around a hole has S in the domain and filled samples in the hole."""
        verdict = hat_fill_probe(DomainSpec.ball_complement(1.0), scaled_pair(1.4), 1)
        assert verdict.verdict == "violation"
        assert verdict.is_violation
        assert np.linalg.norm(verdict.witness) <= 1.0
        assert verdict.margins["filled_outside"] > 0

    def test_consistent(self):
        """A hat inside a ball stays inside."""
        verdict = hat_fill_probe(DomainSpec.ball(1.0), scaled_pair(0.5), 1)
        assert verdict.verdict == "consistent"
        assert verdict.witness is None
        assert verdict.note is None

    def test_surface_outside_is_consistent_with_note(self):
        """When S leaves the domain there is nothing to test."""
        verdict = hat_fill_probe(DomainSpec.ball(0.9), scaled_pair(1.0), 1)
        assert verdict.verdict == "consistent"
        assert "nothing to test" in verdict.note

    def test_order_must_match(self, ball_pair):
        """The hat order must be n - q + 1."""
        with pytest.raises(OrderError):
            hat_fill_probe(DomainSpec.ball(1.0), ball_pair, 2)


class TestHartogsProbe:
    """Tests for hartogs_probe."""

    def test_violation(self):
        """The figure's image avoids a hole its polydisc covers."""
        embed = AffineMap.similarity(np.eye(2), 2.0, np.array([-1.2, 0.0]))
        verdict = hartogs_probe(DomainSpec.ball_complement(0.7), FIGURE, embed, 1, samples=4096)
        assert verdict.verdict == "violation"
        assert np.linalg.norm(verdict.witness) <= 0.7

    def test_consistent_inside_ball(self):
        """A small polydisc image stays in the unit ball."""
        embed = AffineMap.similarity(np.eye(2), 0.6, np.zeros(2))
        verdict = hartogs_probe(DomainSpec.ball(1.0), FIGURE, embed, 1, samples=1024)
        assert verdict.verdict == "consistent"
        assert verdict.note is None

    def test_figure_outside(self):
        """A figure leaving the domain gives a consistent verdict with a note."""
        verdict = hartogs_probe(DomainSpec.ball(0.5), FIGURE, AffineMap.identity(2), 1, 256)
        assert verdict.verdict == "consistent"
        assert verdict.margins["figure_outside"] > 0

    def test_type_must_match(self):
        """A (1, 1) figure only tests q = 1 in C^2."""
        with pytest.raises(OrderError):
            hartogs_probe(DomainSpec.ball(1.0), FIGURE, AffineMap.identity(2), 2)


class TestDiscFamilySweep:
    """Tests for DiscFamily and disc_family_sweep."""

    def test_first_contact(self):
        """Discs {t} x D_sqrt(1-t^2) first reach a small hole at the grid value above 0.05."""
        family = DiscFamily(np.array([-0.5, 0.0]), 1)
        verdict = disc_family_sweep(DomainSpec.ball_complement(0.05), family)
        assert verdict.verdict == "first_contact"
        assert verdict.margins["t_contact"] == pytest.approx(0.0390625)

    def test_no_contact(self):
        """Every disc of the family lies in a larger ball."""
        verdict = disc_family_sweep(DomainSpec.ball(1.5), DiscFamily(np.array([-0.5, 0.0]), 1))
        assert verdict.verdict == "no_contact"

    def test_t_grid_descends(self):
        """The grid runs from sqrt(1 - (Im p_1)^2) down to Re p_1."""
        family = DiscFamily(np.array([0.2 + 0.6j, 0.0]), 1, t_steps=4)
        np.testing.assert_allclose(family.t_values(), [0.8, 0.65, 0.5, 0.35, 0.2])
        assert family.radius(0.8) == pytest.approx(0.0, abs=1e-6)

    def test_center_comes_first(self):
        """The first disc sample is the center (t, p')."""
        family = DiscFamily(np.array([0.0, 0.0]), 1, disc_samples=8)
        np.testing.assert_allclose(family.disc(0.5)[0], [0.5, 0.0, 0.0, 0.0])
        np.testing.assert_allclose(np.linalg.norm(family.rim(0.0), axis=1), 1.0)

    def test_empty_range(self):
        """A base point at the top of the range gives no discs to sweep."""
        verdict = disc_family_sweep(DomainSpec.ball(2.0), DiscFamily(np.array([1.0, 0.0]), 1))
        assert verdict.verdict == "no_contact"
        assert verdict.note == "empty range"

    def test_rim_leaving_domain(self):
        """The disc boundaries must stay in the domain."""
        with pytest.raises(InputError):
            disc_family_sweep(DomainSpec.ball(0.9), DiscFamily(np.array([-0.5, 0.0]), 1))

    @pytest.mark.parametrize(
        "p,q",
        [([0.0, 0.0], 2), ([0.0 + 1.0j, 0.0], 1), ([1.5, 0.0], 1)],
    )
    def test_invalid_family(self, p, q):
        """q < n, |Im p_1| < 1 and Re p_1 below the top of the range are required."""
        with pytest.raises(InputError):
            DiscFamily(np.array(p), q)


class TestLocalMaxCheck:
    """Tests for local_max_check and peak_obstruction."""

    @pytest.fixture
    def box(self):
        """Create an 8^4 grid on [-1, 1]^4."""
        return ChartBox.cube(2, 1.0, 8)

    def test_pluriharmonic_passes(self, box):
        """Re z_1 peaks on the rim of every ball."""
        slab = voxelize(lambda p: np.abs(p[:, 1]) < 0.3, box)
        verdict = local_max_check(slab, re_coordinate(2, 0), np.zeros(4), 0.5, 1)
        assert verdict.verdict == "pass"
        assert verdict.margins["interior_max"] <= verdict.margins["boundary_max"]

    def test_disjoint_ball_passes(self, box):
        """A ball missing A passes with empty maxima."""
        corner = voxelize(lambda p: p[:, 0] > 0.8, box)
        verdict = local_max_check(corner, norm_squared(2), np.zeros(4), 0.3, 1)
        assert verdict.verdict == "pass"
        assert verdict.margins["interior_max"] is None

    def test_non_convex_test_function_skips(self, box):
        """A strictly plurisuperharmonic test function is not admissible."""
        slab = voxelize(lambda p: np.abs(p[:, 1]) < 0.3, box)
        verdict = local_max_check(slab, peaked(2, np.zeros(4)), np.zeros(4), 0.5, 1)
        assert verdict.verdict == "skipped"
        assert "weak 1-convexity" in verdict.note

    def test_peak_obstruction_on_a_ball(self):
        """|z|^2 peaks inside a closed ball away from any smaller rim value."""
        box = ChartBox.cube(2, 1.5, 16)
        center = np.array([0.5, 0.0, 0.0, 0.0])
        A = voxelize(lambda p: np.linalg.norm(p - center, axis=1) <= 0.5, box)
        verdict = peak_obstruction(A, norm_squared(2), 0.8, 1, tau_gap=0.05)
        assert verdict.verdict == "obstruction"
        assert verdict.margins["interior_max"] > verdict.margins["boundary_max"] + 0.05

    def test_peak_obstruction_on_empty_set(self, box):
        """Nothing to obstruct on the empty set."""
        A = voxelize(lambda p: p[:, 0] > 5.0, box)
        assert peak_obstruction(A, norm_squared(2), 0.5).verdict == "none"


class TestExhaustionFillCheck:
    """Tests for exhaustion_fill_check."""

    @pytest.fixture
    def box(self):
        """Create an 8^4 grid on [-1, 1]^4."""
        return ChartBox.cube(2, 1.0, 8)

    def test_ball_exhaustion_bounds_the_polydisc(self, box):
        """The ball exhaustion on a figure bounds it on the whole polydisc."""
        fig = HartogsFigure(1, 1, 0.3, 0.7)
        embed = AffineMap.similarity(np.eye(2), 0.5, np.zeros(2))
        verdict = exhaustion_fill_check(
            DomainSpec.ball(1.0), ball_exhaustion(2), fig, embed, 1, box, samples=2048
        )
        assert verdict.verdict == "pass"
        assert verdict.margins["polydisc_max"] < verdict.margins["c"]
        assert verdict.margins["c"] < verdict.margins["boundary_min"]

    def test_figure_leaving_domain_skips(self, box):
        """A figure outside the domain cannot be tested."""
        embed = AffineMap.similarity(np.eye(2), 1.5, np.zeros(2))
        verdict = exhaustion_fill_check(
            DomainSpec.ball(1.0), ball_exhaustion(2), FIGURE, embed, 1, box, samples=512
        )
        assert verdict.verdict == "skipped"
        assert verdict.note == "figure leaves the domain"

    def test_type_must_match(self, box):
        """The figure must be of type (q, n - q)."""
        with pytest.raises(OrderError):
            exhaustion_fill_check(
                DomainSpec.ball(1.0), ball_exhaustion(2), FIGURE, AffineMap.identity(2), 2, box
            )
