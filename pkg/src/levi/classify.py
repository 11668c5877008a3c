"""Pointwise and regional classification of (weakly) q-convex functions."""

import logging
from dataclasses import dataclass

import numpy as np

from src.core.fields import MaxField, ScalarField
from src.core.geometry import as_points
from src.core.voxels import VoxelSet
from src.errors import DomainError, InputError
from src.levi.forms import ConvexityClass, batch_signatures, signature
from src.levi.hessian import complex_hessian, levi_matrices
from src.schemas.reports import LeviReport, WorstPoint

logger = logging.getLogger(__name__)


def classify_point(
    field: ScalarField, point: np.ndarray, tau: float, step: float
) -> ConvexityClass:
    """Smallest q for which the point classifies q-convex and weakly q-convex.

    Raises:
        DomainError: If the Levi form cannot be computed at the point
    """
    form = complex_hessian(field, point, step)
    return ConvexityClass.from_signature(signature(form, tau), form.eigenvalues())


def classify_max_point(
    mf: MaxField, point: np.ndarray, tau: float, step: float, activity_gap: float
) -> ConvexityClass:
    """Worst class over the branches active at the point.

    A branch is active when it is defined there and within activity_gap of the
    maximum. Every active branch passing is sufficient for q-convexity with corners.

    Raises:
        DomainError: If no branch is defined at the point
    """
    active = mf.active_branches(point, activity_gap)
    result: ConvexityClass | None = None
    for index in active:
        current = classify_point(mf.branches[index], point, tau, step)
        result = current if result is None else result.worst(current)
    assert result is not None
    return result


def weakest_branch(
    mf: MaxField,
    point: np.ndarray,
    q: int,
    strict: bool,
    tau: float,
    step: float,
    activity_gap: float,
) -> ConvexityClass:
    """Class of the active branch closest to failing the q-test at the point.

    The margin is the one of point_margins in the requested mode.

    Raises:
        DomainError: If no branch is defined at the point
    """
    worst: ConvexityClass | None = None
    lowest = np.inf
    for index in mf.active_branches(point, activity_gap):
        current = classify_point(mf.branches[index], point, tau, step)
        margin = float(point_margins(np.asarray(current.eigenvalues), q, tau, strict))
        if worst is None or margin < lowest:
            worst, lowest = current, margin
    assert worst is not None
    return worst


def point_margins(eigenvalues: np.ndarray, q: int, tau: float, strict: bool) -> np.ndarray:
    """Distance of each point from failing the q-test.

    Strict q-convexity needs the q-th smallest eigenvalue above tau, weak q-convexity
    needs it at least -tau; the margin is positive exactly when the test passes.
    """
    pivot = eigenvalues[..., q - 1]
    return pivot - tau if strict else pivot + tau


@dataclass(frozen=True)
class ScanTable:
    """Per-point scan results."""

    points: np.ndarray
    eigenvalues: np.ndarray
    counts: np.ndarray
    defined: np.ndarray
    passed: np.ndarray
    margins: np.ndarray


def sample_region(
    region: VoxelSet, samples_per_voxel: int = 1, seed: int = 0
) -> np.ndarray:
    """Voxel centers of a region plus seeded jitter samples inside each cell."""
    centers = region.centers()
    if samples_per_voxel <= 1 or not len(centers):
        return centers
    rng = np.random.default_rng(seed)
    widths = region.box.widths
    extra = samples_per_voxel - 1
    jitter = rng.uniform(-0.45, 0.45, size=(len(centers), extra, region.box.ndim)) * widths
    jittered = (centers[:, None, :] + jitter).reshape(-1, region.box.ndim)
    return np.concatenate([centers, jittered])


def scan_points(
    field: ScalarField | MaxField,
    points: np.ndarray,
    q: int,
    strict: bool,
    tau: float,
    step: float,
    activity_gap: float = 1e-6,
) -> ScanTable:
    """Classify every point of a batch; undefined points are recorded, not raised."""
    points = as_points(points)
    n = points.shape[1] // 2
    if not 1 <= q <= n:
        raise InputError(f"q must lie in [1, {n}], got {q}")
    if isinstance(field, MaxField):
        eigen = np.full((len(points), n), np.nan)
        counts = np.zeros((len(points), 3), dtype=int)
        defined = np.zeros(len(points), dtype=bool)
        for i, point in enumerate(points):
            try:
                cls = weakest_branch(field, point, q, strict, tau, step, activity_gap)
            except DomainError:
                continue
            defined[i] = True
            eigen[i] = cls.eigenvalues
            counts[i] = cls.signature.as_tuple() if cls.signature else (0, 0, 0)
    else:
        matrices, defined = levi_matrices(field, points, step)
        eigen = np.full((len(points), n), np.nan)
        counts = np.zeros((len(points), 3), dtype=int)
        if defined.any():
            eigen[defined], counts[defined] = batch_signatures(matrices[defined], tau)
    margins = np.full(len(points), -np.inf)
    margins[defined] = point_margins(eigen[defined], q, tau, strict)
    passed = defined & (margins > 0)
    return ScanTable(points, eigen, counts, defined, passed, margins)


def summarize(table: ScanTable, q: int, strict: bool, tau: float, step: float) -> LeviReport:
    """Fold a scan table into a report naming the smallest-margin point."""
    worst = None
    if table.defined.any():
        candidates = np.flatnonzero(table.defined)
        i = int(candidates[np.argmin(table.margins[candidates])])
        worst = WorstPoint(
            point=table.points[i].tolist(),
            eigenvalues=table.eigenvalues[i].tolist(),
            signature=table.counts[i].tolist(),
            margin=float(table.margins[i]),
        )
    undefined = int(np.count_nonzero(~table.defined))
    passed = int(np.count_nonzero(table.passed))
    return LeviReport(
        points_scanned=len(table.points),
        passed=passed,
        fail=len(table.points) - passed - undefined,
        undefined=undefined,
        q=q,
        strict=strict,
        tau=tau,
        h=step,
        worst=worst,
    )


def scan_region(
    field: ScalarField | MaxField,
    region: VoxelSet,
    q: int,
    strict: bool,
    tau: float,
    step: float,
    samples_per_voxel: int = 1,
    seed: int = 0,
) -> LeviReport:
    """Classify a field over the voxel centers (plus jitter) of a region.

    Args:
        field (ScalarField | MaxField): Field to classify
        region (VoxelSet): Nonempty region
        q (int): Order tested
        strict (bool): Test q-convexity (True) or weak q-convexity (False)
        tau (float): Zero tolerance for eigenvalues
        step (float): Difference step for fields without an analytic Hessian
        samples_per_voxel (int, optional): 1 scans centers only. Defaults to 1.
        seed (int, optional): Jitter seed. Defaults to 0.

    Returns:
        LeviReport: Pass/fail counts and the worst point
    """
    if region.is_empty():
        raise InputError("scan region is empty")
    points = sample_region(region, samples_per_voxel, seed)
    table = scan_points(field, points, q, strict, tau, step)
    report = summarize(table, q, strict, tau, step)
    logger.info(
        "Scanned %d points for %s%d-convexity: %d pass, %d fail, %d undefined",
        report.points_scanned,
        "" if strict else "weak ",
        q,
        report.passed,
        report.fail,
        report.undefined,
    )
    return report
