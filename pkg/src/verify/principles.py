"""Local maximum principle and exhaustion checks on voxelized sets."""

import logging

import numpy as np

from src.config import get_settings
from src.core import sampling
from src.core.fields import ScalarField
from src.core.geometry import AffineMap, ChartBox, as_points, to_real
from src.core.voxels import VoxelizeMode, VoxelSet, boundary, voxelize
from src.errors import DomainError, OrderError
from src.hats.figures import HartogsFigure
from src.levi.classify import scan_region
from src.schemas.reports import Verdict
from src.verify.domains import DomainSpec

logger = logging.getLogger(__name__)


def _max_or_none(values: np.ndarray) -> float | None:
    # None stands for -inf: the maximum over an empty set
    return float(values.max()) if len(values) else None


def gradient_bound(psi: ScalarField, region: VoxelSet, step: float) -> float:
    """Largest central-difference gradient norm of psi over the centers of a region."""
    centers = region.centers()
    if not len(centers):
        return 0.0
    squares = np.zeros(len(centers))
    for axis in range(region.box.ndim):
        shift = np.zeros(region.box.ndim)
        shift[axis] = step
        slope = (psi.evaluate(centers + shift) - psi.evaluate(centers - shift)) / (2 * step)
        squares += slope**2
    return float(np.sqrt(squares.max()))


def ball_voxels(box: ChartBox, center: np.ndarray, radius: float) -> VoxelSet:
    center = as_points(center, box.ndim)[0]
    return voxelize(
        lambda points: np.linalg.norm(points - center, axis=1) <= radius,
        box,
        VoxelizeMode.CENTERS,
    )


def local_max_check(
    A: VoxelSet,
    psi: ScalarField,
    center: np.ndarray,
    radius: float,
    q: int,
    tau_gap: float | None = None,
    tau: float | None = None,
    step: float | None = None,
) -> Verdict:
    """Compare the maximum of psi over A ∩ L with its maximum over A ∩ ∂L.

    L is the closed ball of the given center and radius, voxelized at centers. The
    check passes iff the first maximum is at most the second plus tau_gap, with the
    maximum over an empty set taken as -inf. psi must be weakly q-convex on the
    dilation of A inside L; otherwise the check is skipped.

    Args:
        A (VoxelSet): Candidate q-pseudoconcave set
        psi (ScalarField): Test function
        center (np.ndarray): Center of L, real layout
        radius (float): Radius of L
        q (int): Order of the weak convexity required of psi
        tau_gap (float | None, optional): Allowed excess. Defaults to the largest
            gradient norm over L times the voxel diagonal.
        tau (float | None, optional): Eigenvalue zero band. Defaults to settings.
        step (float | None, optional): Difference step. Defaults to settings.

    Returns:
        Verdict: "pass", "fail" or "skipped", with both maxima in the margins
    """
    settings = get_settings()
    tau = settings.tau if tau is None else tau
    step = settings.fd_step if step is None else step
    box = A.box
    L = ball_voxels(box, center, radius)
    params = {"center": as_points(center, box.ndim)[0].tolist(), "radius": radius, "q": q}
    inside = A & L
    if inside.is_empty():
        return Verdict(
            probe="local_max",
            params=params,
            verdict="pass",
            margins={"interior_max": None, "boundary_max": None},
            note="A does not meet L",
        )

    try:
        report = scan_region(psi, A.dilate() & L, q, False, tau, step)
        gap = gradient_bound(psi, L, step) * box.diagonal if tau_gap is None else tau_gap
    except DomainError as exc:
        return Verdict(probe="local_max", params=params, verdict="skipped", note=str(exc))
    if not report.all_pass:
        logger.warning("Local max check skipped: psi is not weakly %d-convex near A", q)
        return Verdict(
            probe="local_max",
            params=params,
            verdict="skipped",
            note=f"psi fails weak {q}-convexity at {report.fail + report.undefined} points",
        )

    interior_max = _max_or_none(psi.evaluate(inside.centers()))
    rim = A & boundary(L)
    boundary_max = _max_or_none(psi.evaluate(rim.centers())) if not rim.is_empty() else None
    passed = boundary_max is not None and interior_max <= boundary_max + gap
    witness = None
    if not passed:
        centers = inside.centers()
        witness = centers[np.argmax(psi.evaluate(centers))].tolist()
    return Verdict(
        probe="local_max",
        params=params,
        verdict="pass" if passed else "fail",
        witness=witness,
        margins={"interior_max": interior_max, "boundary_max": boundary_max, "tau_gap": gap},
    )


def peak_obstruction(
    A: VoxelSet,
    psi: ScalarField,
    radius: float,
    q: int = 1,
    tau_gap: float | None = None,
) -> Verdict:
    """Run the local maximum check on a ball centered where psi peaks over A.

    For strictly plurisubharmonic psi a failing check is a constructive obstruction
    to A being q-pseudoconcave.
    """
    if A.is_empty():
        return Verdict(probe="peak_obstruction", verdict="none", note="A is empty")
    centers = A.centers()
    peak = centers[np.argmax(psi.evaluate(centers))]
    check = local_max_check(A, psi, peak, radius, q, tau_gap)
    verdict = {"fail": "obstruction", "pass": "none"}.get(check.verdict, check.verdict)
    return Verdict(
        probe="peak_obstruction",
        params={**check.params, "radius": radius},
        verdict=verdict,
        witness=peak.tolist(),
        margins=check.margins,
        note=check.note,
    )


def exhaustion_fill_check(
    omega: DomainSpec,
    rho: ScalarField,
    fig: HartogsFigure,
    embed: AffineMap,
    q: int,
    box: ChartBox,
    samples: int | None = None,
    seed: int = 0,
    margin: float = 1e-3,
) -> Verdict:
    """Check that an (n - q)-convex exhaustion bounds rho on the embedded polydisc.

    With c the maximum of rho over the embedded figure plus margin, the check passes
    iff every polydisc sample lies in Omega with rho below c. It is skipped when rho
    fails the Levi scan on Omega's voxels, when the figure leaves Omega, or when the
    sublevel set {rho <= c} reaches the boundary of Omega's voxels inside the box.

    Raises:
        OrderError: If the figure is not of type (q, n - q)
    """
    settings = get_settings()
    samples = samples or settings.filled_samples
    n = embed.dimension
    if fig.k != q or fig.m != n - q:
        raise OrderError(f"figure ({fig.k}, {fig.m}) is not of type (q, n - q) for q={q}")
    params = {"q": q, "samples": samples, "seed": seed, "margin": margin}

    def skipped(note: str) -> Verdict:
        logger.warning("Exhaustion check skipped: %s", note)
        return Verdict(probe="exhaustion_fill", params=params, verdict="skipped", note=note)

    region = omega.voxelize(box)
    if region.is_empty():
        return skipped("domain has no voxels in the box")
    report = scan_region(rho, region, n - q, True, settings.tau, settings.fd_step)
    if not report.all_pass:
        return skipped(f"rho is not {n - q}-convex on the domain")

    figure = to_real(embed.forward_complex(fig.sample(samples, seed)))
    if not omega.contains(figure).all():
        return skipped("figure leaves the domain")
    model = sampling.polydisc(n, samples, seed + 7)
    polydisc = to_real(embed.forward_complex(model))
    outside = ~omega.contains(polydisc)
    if outside.any():
        return Verdict(
            probe="exhaustion_fill",
            params=params,
            verdict="fail",
            witness=polydisc[np.argmax(outside)].tolist(),
            note="polydisc leaves the domain",
        )

    # polydisc samples inside the figure join the figure's pool
    in_figure = fig.contains(to_real(model))
    c = float(rho.evaluate(np.concatenate([figure, polydisc[in_figure]])).max()) + margin
    rim = boundary(region)
    floor = float(rho.evaluate(rim.centers()).min())
    if floor <= c:
        return skipped(f"sublevel set rho <= {c:.6g} is not compact in the box")

    values = rho.evaluate(polydisc)
    over = values >= c
    return Verdict(
        probe="exhaustion_fill",
        params=params,
        verdict="fail" if over.any() else "pass",
        witness=polydisc[np.argmax(over)].tolist() if over.any() else None,
        margins={"c": c, "polydisc_max": float(values.max()), "boundary_min": floor},
        note="exhaustion checked on the box only",
    )
