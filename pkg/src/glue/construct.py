"""Inductive construction of a positive q-convex function with corners near K."""

import logging
from dataclasses import dataclass

import numpy as np

from src.bump.field import hat_bump
from src.bump.params import BumpParams
from src.config import get_settings
from src.core.ambient import AmbientDomain
from src.core.geometry import ChartBox
from src.core.parallel import parallel_map
from src.core.voxels import VoxelSet
from src.cuts.sequence import CutSequence
from src.errors import (
    CannotDominateError,
    ConstructionError,
    CoverageError,
    DomainError,
    GlueError,
    InputError,
    SeamViolationError,
)
from src.glue.gluing import GlueRegion, choose_scaling, glue_pair
from src.glue.tree import ConstructedFunction, Leaf, evaluate_constructed, local_max_field
from src.hats.pairs import HatPair
from src.hats.voxelize import HatVoxels, valid_in_ambient, voxelize_hat
from src.levi.classify import sample_region, weakest_branch
from src.schemas.reports import CheckResult, ValidationReport

logger = logging.getLogger(__name__)

_SEAM_ERRORS = (CannotDominateError, SeamViolationError, GlueError, CoverageError)


@dataclass(frozen=True)
class EmptyingSequence:
    """A cut sequence K_1 ⊃ K_2 ⊃ ... ⊃ K_m = ∅ and its pairs P_1, ..., P_{m-1}."""

    sequence: CutSequence

    def __post_init__(self) -> None:
        if not self.sequence.residual.is_empty():
            raise InputError(
                f"sequence leaves {self.sequence.residual.count} voxels; it does not empty K"
            )

    @property
    def pairs(self) -> list[HatPair]:
        return self.sequence.pairs

    @property
    def sets(self) -> list[VoxelSet]:
        """K_1, ..., K_m."""
        return [self.sequence.initial] + [record.after for record in self.sequence.records]


@dataclass
class ConstructionLog:
    """Scaling constants per step and the steps that needed the erosion retry."""

    scales: dict[int, float]
    retried: list[int]


def _leaf(pair: HatPair, q: int, params: BumpParams, box: ChartBox, step: int) -> Leaf:
    support = voxelize_hat(pair, box, HatVoxels.INTERIOR_CONSERVATIVE)
    return Leaf(hat_bump(pair, q, params), 1.0, support, step, pair)


def _glue_step(
    psi: ConstructedFunction,
    bump: Leaf,
    K: VoxelSet,
    K_next: VoxelSet,
    step: int,
    erode: bool,
    margin: float | None = None,
    tolerance: float | None = None,
) -> tuple[ConstructedFunction, float]:
    V1, V2 = psi.W, bump.support
    if erode:
        # shrink both pieces by one voxel, keeping what each must cover
        V1 = V1.erode() | K_next
        V2 = V2.erode() | (K & bump.support)
    region = GlueRegion(V1, V2, K)
    c = choose_scaling(psi, bump.branch, region.seam_in, region.seam_out, margin, tolerance)
    scaled = Leaf(bump.branch, c, bump.support, step, bump.hat)
    return glue_pair(psi, scaled, K, tolerance, V1=V1, V2=V2, step=step), c


def build_q_convex(
    K: VoxelSet,
    seq: EmptyingSequence | CutSequence,
    q: int,
    params: BumpParams | None = None,
    ambient: AmbientDomain | None = None,
    margin: float | None = None,
    tolerance: float | None = None,
) -> tuple[ConstructedFunction, ConstructionLog]:
    """Glue scaled hat bumps backwards along an emptying sequence.

    The last pair's bump on its interior voxels starts the induction. Step j glues the
    current function on V1 = its W with c * bump(P_j) on V2 = interior voxels of P_j over
    K_j. A failing step is retried once with both pieces eroded by one voxel.

    Args:
        K (VoxelSet): Initial set
        seq (EmptyingSequence | CutSequence): Cut sequence emptying K
        q (int): Convexity order
        params (BumpParams | None, optional): Bump parameters. Defaults to settings.
        ambient (AmbientDomain | None, optional): When given, every pair must be valid in it
        margin (float | None, optional): Scaling margin. Defaults to settings.
        tolerance (float | None, optional): Seam tolerance. Defaults to settings.

    Returns:
        tuple[ConstructedFunction, ConstructionLog]: Function with K ⊆ W, and the scaling log

    Raises:
        InputError: If the sequence does not start at K or does not empty it
        ConstructionError: If a step fails after the retry
    """
    emptying = seq if isinstance(seq, EmptyingSequence) else EmptyingSequence(seq)
    if emptying.sequence.initial != K:
        raise InputError("sequence does not start from K")
    params = params or BumpParams.from_settings()
    pairs, sets = emptying.pairs, emptying.sets
    if not pairs:
        raise InputError("K is empty; there is nothing to construct")
    if ambient is not None:
        for step, pair in enumerate(pairs, start=1):
            if not valid_in_ambient(pair, ambient):
                raise ConstructionError(f"hat {pair.label} is not valid in the ambient", step)
    box = K.box
    last = len(pairs)
    psi: ConstructedFunction = _leaf(pairs[-1], q, params, box, last)
    log = ConstructionLog(scales={last: 1.0}, retried=[])
    logger.info("Construction base: step %d, hat %s", last, pairs[-1].label)
    for step in range(last - 1, 0, -1):
        bump = _leaf(pairs[step - 1], q, params, box, step)
        K_step, K_next = sets[step - 1], sets[step]
        try:
            psi, c = _glue_step(psi, bump, K_step, K_next, step, False, margin, tolerance)
        except _SEAM_ERRORS as first:
            logger.warning("Step %d failed (%s); retrying with eroded pieces", step, first)
            log.retried.append(step)
            try:
                psi, c = _glue_step(psi, bump, K_step, K_next, step, True, margin, tolerance)
            except _SEAM_ERRORS as exc:
                raise ConstructionError(str(exc), step, getattr(exc, "witness", None)) from exc
        log.scales[step] = c
        logger.info("Construction step %d: c=%.6g, |W|=%d", step, c, psi.W.count)
    if not K.issubset(psi.W):
        raise ConstructionError("neighborhood W does not contain K", 1)
    return psi, log


def _pivot(
    f: ConstructedFunction, point: np.ndarray, q: int, tau: float, step: float, gap: float
) -> float:
    """q-th smallest eigenvalue of the weakest active leaf, -inf where no leaf is defined."""
    try:
        cls = weakest_branch(local_max_field(f, point), point, q, True, tau, step, gap)
    except DomainError:
        return -np.inf
    return cls.eigenvalues[q - 1] if cls.eigenvalues else -np.inf


def certify_constructed(
    f: ConstructedFunction,
    K: VoxelSet,
    q: int,
    tau: float | None = None,
    step: float | None = None,
    samples_per_voxel: int = 1,
    seed: int = 0,
) -> ValidationReport:
    """Sampled certificate of positivity and q-convexity with corners near K.

    Samples come from the one-voxel dilation of K inside W. At every sample the value
    must be positive and the q-th smallest eigenvalue of every active leaf must be
    positive. Eigenvalues are compared against the absolute zero band tau: samples
    whose weakest pivot lies in (0, tau] are counted in a marginal_pivot flag and do
    not fail the check.
    """
    settings = get_settings()
    tau = settings.tau if tau is None else tau
    step = settings.fd_step if step is None else step
    region = K.dilate() & f.W
    points = sample_region(region, samples_per_voxel, seed)
    if len(points):
        points = points[f.W.contains_points(points)]
    values = np.full(len(points), np.nan)
    for chunk in np.array_split(np.arange(len(points)), max(1, len(points) // 4096)):
        if not len(chunk):
            continue
        try:
            values[chunk] = evaluate_constructed(f, points[chunk])
        except DomainError:
            for i in chunk:
                try:
                    values[i] = evaluate_constructed(f, points[i])[0]
                except DomainError:
                    continue

    positive = values > 0
    check_a = CheckResult(
        name="positive",
        passed=bool(positive.all()) and len(points) > 0,
        samples=len(points),
        failures=int(np.count_nonzero(~positive)),
        margin=float(np.nanmin(values)) if np.isfinite(values).any() else None,
        witness=points[np.argmin(positive)].tolist() if not positive.all() else None,
    )

    gap = settings.activity_gap
    pivots = np.array(
        parallel_map(lambda i: _pivot(f, points[i], q, tau, step, gap), range(len(points))),
        dtype=float,
    ).reshape(-1)
    bad = pivots <= 0
    marginal = int(np.count_nonzero((pivots > 0) & (pivots <= tau)))
    band = f"0 < pivot <= tau={tau:g}"
    finite = np.isfinite(pivots)
    check_b = CheckResult(
        name="q_convex_with_corners",
        passed=not bad.any() and len(points) > 0,
        samples=len(points),
        failures=int(np.count_nonzero(bad)),
        margin=float(pivots[finite].min()) if finite.any() else None,
        witness=points[np.argmax(bad)].tolist() if bad.any() else None,
        note=f"{marginal} marginal samples ({band})" if marginal else None,
    )
    report = ValidationReport(
        kind="construction",
        q=q,
        passed=check_a.passed and check_b.passed,
        checks=[check_a, check_b],
        params={"tau": tau, "h": step, "samples": len(points), "seed": seed},
        flags=[f"marginal_pivot:{marginal} ({band})"] if marginal else [],
    )
    verdict = "pass" if report.passed else "FAIL"
    logger.info("Certification: %s over %d samples", verdict, len(points))
    return report
