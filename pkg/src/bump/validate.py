"""Sampled certification of hat bumps and of the surrogate they are built on."""

import logging

import numpy as np

from src.bump.field import phi_tilde_levi
from src.bump.params import BumpParams
from src.config import get_settings
from src.core import sampling
from src.core.fields import ScalarField
from src.core.geometry import ChartBox, to_real
from src.errors import BumpCertificationError
from src.hats.pairs import HatPair, HatRegion
from src.hats.voxelize import HatVoxels, voxelize_hat
from src.levi.classify import scan_points
from src.schemas.reports import CheckResult, ValidationReport

logger = logging.getLogger(__name__)

ZERO_TOL = 1e-12
SURROGATE_FLOOR = 0.05
MAX_ESCALATIONS = 6


def _check(
    name: str, points: np.ndarray, considered: np.ndarray, bad: np.ndarray, margin: float | None
) -> CheckResult:
    failures = int(np.count_nonzero(bad))
    return CheckResult(
        name=name,
        passed=failures == 0,
        samples=int(np.count_nonzero(considered)),
        failures=failures,
        margin=margin,
        witness=points[np.argmax(bad)].tolist() if failures else None,
    )


def _min(values: np.ndarray) -> float | None:
    return float(values.min()) if values.size else None


def validate_bump(
    field: ScalarField,
    pair: HatPair,
    q: int,
    box: ChartBox,
    tau: float | None = None,
    step: float | None = None,
) -> ValidationReport:
    """Check the four bump properties on voxel centers around the hat.

    Checks: vanishes_outside (|phi| <= 1e-12 off the filled hat), positive_interior
    (phi > 0 on conservative interior voxels), weak_q_convex (at most q - 1 negative
    eigenvalues wherever defined) and strict_q_convex_interior (q-th eigenvalue > 0 on
    interior samples). Interior samples whose q-th eigenvalue is positive but below tau,
    or where the cutoff has underflowed to zero, sit in the flat zone of the cutoff;
    they are counted in the flags, not failed.

    Args:
        field (ScalarField): Candidate bump
        pair (HatPair): Hat pair it belongs to
        q (int): Convexity order
        box (ChartBox): Grid supplying the samples, restricted to the hat's neighborhood
        tau (float | None, optional): Eigenvalue tolerance. Defaults to settings.tau.
        step (float | None, optional): Difference step. Defaults to settings.fd_step.

    Returns:
        ValidationReport: Per-check results with margins and witnesses
    """
    settings = get_settings()
    tau = settings.tau if tau is None else tau
    step = settings.fd_step if step is None else step
    lower, upper = pair.bounds(1.0 + pair.mu, box.diagonal)
    window = box.window(lower, upper)
    points = box.centers(window) if window is not None else np.empty((0, box.ndim))

    codes = pair.classify(points)
    defined = field.defined(points)
    values = np.zeros(len(points))
    if defined.any():
        values[defined] = field.evaluator(points[defined])

    outside = defined & (codes == HatRegion.OUTSIDE)
    outside_mag = np.abs(values[outside])
    check_a = _check(
        "vanishes_outside",
        points,
        outside,
        outside & (np.abs(values) > ZERO_TOL),
        ZERO_TOL - float(outside_mag.max()) if outside_mag.size else None,
    )

    interior_cells = voxelize_hat(pair, box, HatVoxels.INTERIOR_CONSERVATIVE).centers()
    interior_ok = field.defined(interior_cells)
    interior_values = np.full(len(interior_cells), -np.inf)
    if interior_ok.any():
        interior_values[interior_ok] = field.evaluator(interior_cells[interior_ok])
    check_b = _check(
        "positive_interior",
        interior_cells,
        np.ones(len(interior_cells), dtype=bool),
        interior_values <= 0,
        _min(interior_values),
    )

    sampled = points[defined]
    table = scan_points(field, sampled, q, False, tau, step)
    check_c = _check(
        "weak_q_convex", sampled, table.defined, table.defined & ~table.passed, _min(table.margins)
    )

    inner = table.defined & (codes[defined] == HatRegion.INTERIOR)
    pivot = np.where(inner, table.eigenvalues[:, q - 1], np.inf)
    # the cutoff underflows to zero next to the roof; there the pivot is zero too
    underflow = inner & (values[defined] == 0.0)
    check_d = _check(
        "strict_q_convex_interior",
        sampled,
        inner,
        inner & (pivot <= 0) & ~underflow,
        _min(pivot[inner]),
    )
    marginal = int(np.count_nonzero(inner & (pivot <= tau) & ((pivot > 0) | underflow)))

    checks = [check_a, check_b, check_c, check_d]
    flags = [f"marginal_interior:{marginal} (0 <= pivot <= tau={tau:g})"] if marginal else []
    report = ValidationReport(
        kind="bump",
        q=q,
        passed=all(c.passed for c in checks),
        checks=checks,
        params={"k": pair.k, "r": pair.r, "tau": tau, "h": step, "samples": len(points)},
        flags=flags,
    )
    logger.info(
        "Bump %s validation: %s over %d samples",
        pair.label or "<unnamed>",
        "pass" if report.passed else "FAIL",
        len(points),
    )
    return report


def surrogate_samples(params: BumpParams, k: int, count: int, seed: int) -> np.ndarray:
    """Real-layout points of C^k with Re z_1 in (0.05, R_v] and |z| <= R_v."""
    radius = params.validation_radius
    batch = 4 * count
    while True:
        z = radius * sampling.ball(k, batch, seed)
        kept = z[z[:, 0].real > SURROGATE_FLOOR]
        if len(kept) >= count or batch > 1024 * count:
            return to_real(kept[:count])
        batch *= 4


def surrogate_is_psh(
    params: BumpParams, k: int, count: int = 200, seed: int = 0
) -> tuple[bool, float]:
    """Whether the surrogate is strictly psh at every sample, and its minimum eigenvalue."""
    points = surrogate_samples(params, k, count, seed)
    smallest = np.linalg.eigvalsh(phi_tilde_levi(points, params))[:, 0]
    return bool(np.all(smallest > 0)), float(smallest.min())


def certify_surrogate(
    params: BumpParams | None = None, k: int = 2, count: int = 200, seed: int = 0
) -> BumpParams:
    """Certify strict plurisubharmonicity of the surrogate, escalating parameters on failure.

    Escalation doubles M_b, then doubles K_g, then halves R_v, cycling, at most six times.

    Raises:
        BumpCertificationError: If every escalation fails
    """
    params = params or BumpParams.from_settings()
    for attempt in range(MAX_ESCALATIONS + 1):
        ok, smallest = surrogate_is_psh(params, k, count, seed)
        if ok:
            return params
        if attempt == MAX_ESCALATIONS:
            break
        logger.warning(
            "Surrogate not strictly psh (min eigenvalue %.3e) with %s; escalating", smallest, params
        )
        params = params.escalated(attempt)
    raise BumpCertificationError(
        f"surrogate failed certification after {MAX_ESCALATIONS} escalations"
    )
