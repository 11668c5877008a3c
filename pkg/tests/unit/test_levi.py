"""Tests for Levi forms and q-convexity classification."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.core.fields import MaxField, ScalarField
from src.core.geometry import AffineMap, ChartBox, cpoint, random_unitary
from src.core.voxels import VoxelSet, voxelize
from src.errors import DomainError, InputError
from src.levi.classify import (
    classify_max_point,
    classify_point,
    sample_region,
    scan_points,
    scan_region,
    summarize,
)
from src.levi.forms import ConvexityClass, HermitianForm, Signature, batch_signatures, signature
from src.levi.hessian import complex_hessian, levi_matrices
from src.scenes.catalogue import (
    ball_exhaustion,
    cp_chart_rho,
    indefinite,
    norm_squared,
    re_z1_squared,
)

TAU = 1e-7
STEP = 1e-3


class TestHermitianForm:
    """Tests for HermitianForm and signatures."""

    def test_symmetrizes(self):
        """The stored matrix is the Hermitian part of the input."""
        form = HermitianForm(np.array([[1.0, 2.0], [0.0, 1.0]]))
        np.testing.assert_allclose(form.matrix, [[1.0, 1.0], [1.0, 1.0]])
        np.testing.assert_allclose(form.eigenvalues(), [0.0, 2.0], atol=1e-12)

    def test_rejects_non_square(self):
        """A Levi form is square."""
        with pytest.raises(InputError):
            HermitianForm(np.zeros((2, 3)))

    def test_signature_counts(self):
        """Eigenvalues within tau of zero count as zero."""
        form = HermitianForm(np.diag([-1.0, 1e-9, 2.0]))
        assert signature(form, TAU).as_tuple() == (1, 1, 1)

    def test_signature_needs_positive_tau(self):
        """A nonpositive tolerance is rejected."""
        with pytest.raises(InputError):
            signature(HermitianForm(np.eye(2)), 0.0)

    def test_batch_signatures_match_single(self):
        """The stacked solver agrees with the per-form one."""
        matrices = np.stack([np.diag([1.0, -1.0]), np.diag([0.0, 3.0])]).astype(complex)
        values, counts = batch_signatures(matrices, TAU)
        np.testing.assert_allclose(values, [[-1.0, 1.0], [0.0, 3.0]])
        np.testing.assert_array_equal(counts, [[1, 0, 1], [0, 1, 1]])


class TestConvexityClass:
    """Tests for ConvexityClass."""

    @pytest.mark.parametrize(
        "counts,strict,weak",
        [((0, 0, 2), 1, 1), ((0, 2, 0), 3, 1), ((1, 0, 1), 2, 2), ((1, 1, 1), 3, 2)],
    )
    def test_from_signature(self, counts, strict, weak):
        """Strict needs n_nonpositive < q, weak needs n_neg < q."""
        cls = ConvexityClass.from_signature(Signature(*counts, tau=TAU))
        assert (cls.q_min_strict, cls.q_min_weak) == (strict, weak)

    def test_is_q_convex(self):
        """A class is q-convex for every q at or above its bound."""
        cls = ConvexityClass(2, 1)
        assert cls.is_q_convex(2)
        assert not cls.is_q_convex(1)
        assert cls.is_q_convex(1, strict=False)

    def test_worst(self):
        """The worst of two classes takes the larger bound on each side."""
        assert ConvexityClass(3, 1).worst(ConvexityClass(2, 2)) == ConvexityClass(3, 2)

    def test_worst_tie_keeps_the_weaker_signature(self):
        """Equal strict bounds keep the signature of the larger weak bound."""
        flat = ConvexityClass.from_signature(Signature(0, 2, 0, tau=TAU), np.zeros(2))
        mixed = ConvexityClass.from_signature(Signature(1, 1, 0, tau=TAU), np.array([-1.0, 0.0]))
        for result in (flat.worst(mixed), mixed.worst(flat)):
            assert result.signature.as_tuple() == (1, 1, 0)
            assert result.eigenvalues == (-1.0, 0.0)


class TestCatalogueClassification:
    """Tests for classify_point on catalogue fields."""

    @pytest.mark.parametrize(
        "field,point,counts,strict,weak",
        [
            (norm_squared(2), cpoint(0.3, -0.2j), (0, 0, 2), 1, 1),
            (re_z1_squared(2), cpoint(0.3, 0.1), (0, 2, 0), 3, 1),
            (indefinite(2), cpoint(0.1, 0.1), (1, 0, 1), 2, 2),
            (cp_chart_rho(), cpoint(0, 1), (0, 0, 2), 1, 1),
        ],
    )
    def test_known_classes(self, field, point, counts, strict, weak):
        """Closed-form fields land in their known classes."""
        cls = classify_point(field, point, TAU, STEP)
        assert cls.signature.as_tuple() == counts
        assert (cls.q_min_strict, cls.q_min_weak) == (strict, weak)

    @pytest.mark.parametrize(
        "field,point",
        [
            (norm_squared(2), cpoint(0.3, -0.2j)),
            (cp_chart_rho(), cpoint(0.3 + 0.1j, 0.8 - 0.2j)),
            (ball_exhaustion(2), cpoint(0.2 - 0.1j, 0.4j)),
            (re_z1_squared(2), cpoint(0.5, 0.5)),
        ],
    )
    def test_finite_differences_match_formula(self, field, point):
        """Central differences reproduce the analytic Levi form."""
        analytic = complex_hessian(field, point, STEP)
        numeric = complex_hessian(field, point, STEP, finite_difference=True)
        assert analytic.deviation(numeric) < 1e-4

    def test_stencil_leaving_domain_raises(self):
        """Differencing across the domain boundary is an error."""
        with pytest.raises(DomainError):
            complex_hessian(ball_exhaustion(1), cpoint(0.99999), STEP, finite_difference=True)

    def test_max_point_uses_worst_active_branch(self):
        """On the tie set both branches are active and the worse one wins."""
        field = MaxField.of([norm_squared(2), indefinite(2)])
        cls = classify_max_point(field, cpoint(0.5, 0), TAU, STEP, 1e-6)
        assert (cls.q_min_strict, cls.q_min_weak) == (2, 2)
        off_tie = classify_max_point(field, cpoint(0.5, 0.5), TAU, STEP, 1e-6)
        assert off_tie.q_min_strict == 1


def _fields_and_points(rng: np.random.Generator) -> list[tuple[ScalarField, np.ndarray]]:
    """Catalogue fields in C^2 with seeded points inside their domains."""
    inner = rng.uniform(-0.4, 0.4, size=(20, 4))
    chart = rng.uniform(-0.5, 0.5, size=(20, 4))
    chart[:, 2] = rng.uniform(0.8, 1.2, size=20)
    return [
        (norm_squared(2), inner),
        (re_z1_squared(2), inner),
        (indefinite(2), inner),
        (ball_exhaustion(2), inner),
        (cp_chart_rho(), chart),
    ]


class TestLeviInvariance:
    """Tests that classification follows the transformation rules of Levi forms."""

    @settings(max_examples=25, deadline=None)
    @given(
        seed=st.integers(0, 2**32 - 1),
        which=st.sampled_from(["norm_sq", "indefinite", "rho_ball", "cp_rho"]),
    )
    def test_unitary_change_of_coordinates(self, seed, which):
        """Pulling back by a unitary map keeps the class and the eigenvalues."""
        rng = np.random.default_rng(seed)
        fields = {
            "norm_sq": norm_squared(2),
            "indefinite": indefinite(2),
            "rho_ball": ball_exhaustion(2),
            "cp_rho": cp_chart_rho(),
        }
        field = fields[which]
        point = rng.uniform(-0.4, 0.4, size=4)
        if which == "cp_rho":
            point[2] = rng.uniform(0.8, 1.2)
        chart = AffineMap(random_unitary(2, rng), np.zeros(2))
        moved = chart.backward(point[None, :])[0]
        before = classify_point(field, point, TAU, STEP)
        after = classify_point(field.pullback(chart), moved, TAU, STEP)
        assert (after.q_min_strict, after.q_min_weak) == (before.q_min_strict, before.q_min_weak)
        np.testing.assert_allclose(after.eigenvalues, before.eigenvalues, atol=1e-9)

    @settings(max_examples=25, deadline=None)
    @given(
        factor=st.floats(0.01, 100.0),
        which=st.sampled_from(["norm_sq", "re_z1_sq", "indefinite", "rho_ball"]),
    )
    def test_positive_scaling(self, factor, which):
        """c * f with zero band c * tau classifies like f with tau."""
        fields = {
            "norm_sq": norm_squared(2),
            "re_z1_sq": re_z1_squared(2),
            "indefinite": indefinite(2),
            "rho_ball": ball_exhaustion(2),
        }
        field = fields[which]
        point = cpoint(0.3 - 0.1j, 0.2j)
        before = classify_point(field, point, TAU, STEP)
        after = classify_point(field.scaled(factor), point, TAU * factor, STEP)
        assert (after.q_min_strict, after.q_min_weak) == (before.q_min_strict, before.q_min_weak)
        assert after.signature.as_tuple() == before.signature.as_tuple()

    def test_differences_agree_on_random_points(self):
        """Analytic and finite-difference Levi forms agree on 100 seeded points."""
        rng = np.random.default_rng(2024)
        checked = 0
        for field, points in _fields_and_points(rng):
            analytic, ok_a = levi_matrices(field, points, STEP)
            numeric, ok_n = levi_matrices(field, points, STEP, prefer_analytic=False)
            assert ok_a.all() and ok_n.all()
            scale = np.maximum(1.0, np.abs(analytic).max(axis=(1, 2)))
            deviation = np.abs(analytic - numeric).max(axis=(1, 2))
            assert (deviation < 1e-4 * scale).all()
            checked += len(points)
        assert checked == 100


class TestScan:
    """Tests for region scans."""

    @pytest.fixture
    def region(self):
        """Create the cells of a 4^4 grid within 0.9 of the origin."""
        box = ChartBox.cube(2, 1.0, 4)
        return voxelize(lambda p: np.linalg.norm(p, axis=1) <= 0.9, box)

    def test_sample_region_jitters_inside_cells(self, region):
        """Extra samples stay in their cells and follow the centers."""
        points = sample_region(region, samples_per_voxel=3, seed=1)
        assert len(points) == 3 * region.count
        np.testing.assert_array_equal(points[: region.count], region.centers())
        assert region.contains_points(points).all()

    def test_strictly_psh_passes_everywhere(self, region):
        """|z|^2 is 1-convex at every scanned point."""
        report = scan_region(norm_squared(2), region, 1, True, TAU, STEP)
        assert report.passed == report.points_scanned == region.count
        assert report.fail == 0
        assert report.worst.margin == pytest.approx(1.0 - TAU)

    def test_indefinite_fails_for_q1(self, region):
        """The indefinite field fails 1-convexity with margin about -2."""
        report = scan_region(indefinite(2), region, 1, True, TAU, STEP)
        assert report.fail == report.points_scanned
        assert report.worst.margin == pytest.approx(-2.0)
        assert report.worst.signature == [1, 0, 1]

    def test_weak_q2_passes_for_indefinite(self, region):
        """With one negative eigenvalue the field is weakly 2-convex."""
        report = scan_region(indefinite(2), region, 2, False, TAU, STEP)
        assert report.passed == report.points_scanned

    def test_undefined_points_are_counted(self):
        """Points outside the field's domain are undefined, not failures."""
        box = ChartBox.cube(2, 1.0, 4)
        report = scan_region(ball_exhaustion(2), VoxelSet.full(box), 1, True, TAU, STEP)
        assert report.undefined > 0
        assert report.fail == 0
        assert report.passed + report.undefined == box.size

    def test_summarize_all_undefined(self):
        """A table with no defined point has no worst point."""
        table = scan_points(ball_exhaustion(1), np.array([[2.0, 0.0]]), 1, True, TAU, STEP)
        report = summarize(table, 1, True, TAU, STEP)
        assert report.worst is None
        assert report.undefined == 1

    def test_q_out_of_range(self):
        """q must lie between 1 and n."""
        with pytest.raises(InputError):
            scan_points(norm_squared(2), cpoint(0, 0), 3, True, TAU, STEP)

    def test_empty_region(self):
        """Scanning nothing is an input error."""
        with pytest.raises(InputError):
            empty = VoxelSet.empty(ChartBox.cube(1, 1.0, 4))
            scan_region(norm_squared(1), empty, 1, True, TAU, STEP)

    def test_weak_scan_of_a_max_field_uses_the_weakest_branch(self):
        """At a tie the branch with the smallest weak margin decides the verdict."""
        field = MaxField.of([re_z1_squared(2), indefinite(2)])
        table = scan_points(field, cpoint(0, 0), 1, False, TAU, STEP)
        assert not table.passed[0]
        assert table.margins[0] == pytest.approx(-2.0 + TAU)
        np.testing.assert_array_equal(table.counts[0], [1, 0, 1])

    def test_max_field_margin_follows_the_mode(self):
        """The weakest branch for weak q = 2 is the flat one, and it passes only weakly."""
        field = MaxField.of([re_z1_squared(2), indefinite(2)])
        weak = scan_points(field, cpoint(0, 0), 2, False, TAU, STEP)
        assert weak.passed[0]
        assert weak.margins[0] == pytest.approx(TAU)
        strict = scan_points(field, cpoint(0, 0), 2, True, TAU, STEP)
        assert not strict.passed[0]
        assert strict.margins[0] == pytest.approx(-TAU)
