"""Max-gluing of two functions along the seams of their pieces."""

import logging
from dataclasses import dataclass

import numpy as np

from src.config import get_settings
from src.core.fields import Evaluable
from src.core.voxels import VoxelSet, boundary
from src.errors import CannotDominateError, CoverageError, GlueError, SeamViolationError
from src.glue.tree import ConstructedFunction, Leaf, MaxNode, evaluate_constructed

logger = logging.getLogger(__name__)

POSITIVITY_FLOOR = 1e-12


@dataclass(frozen=True)
class GlueRegion:
    """Two open pieces covering K, with the seams where the branches must cross."""

    V1: VoxelSet
    V2: VoxelSet
    K: VoxelSet

    def covers(self) -> bool:
        return self.K.issubset(self.V1 | self.V2)

    @property
    def seam_out(self) -> VoxelSet:
        """∂V2 ∩ V1 ∩ K, where the first branch must win."""
        return boundary(self.V2) & self.V1 & self.K

    @property
    def seam_in(self) -> VoxelSet:
        """∂V1 ∩ V2 ∩ K, where the second branch must win."""
        return boundary(self.V1) & self.V2 & self.K

    def neighborhood(self) -> VoxelSet:
        """W: one-voxel dilations of K \\ V2 inside V1 and of K \\ V1 inside V2, plus V1 ∩ V2."""
        first = (self.K - self.V2).dilate() & self.V1
        second = (self.K - self.V1).dilate() & self.V2
        return first | second | (self.V1 & self.V2)


def _evaluate(f: ConstructedFunction | Evaluable, points: np.ndarray) -> np.ndarray:
    if isinstance(f, Leaf | MaxNode):
        return evaluate_constructed(f, points)
    return f.evaluate(points)


def _witness(seam: VoxelSet, bad: np.ndarray) -> tuple[int, ...]:
    return tuple(int(i) for i in seam.indices()[np.argmax(bad)])


def choose_scaling(
    psi: ConstructedFunction | Evaluable,
    phi: Evaluable,
    seam_in: VoxelSet,
    seam_out: VoxelSet,
    margin: float | None = None,
    tol: float | None = None,
) -> float:
    """Smallest documented c with psi < c * phi on seam_in and psi > c * phi on seam_out.

    c = max((1 + margin) * max(psi / phi), max((psi + tol) / phi)) over seam_in centers,
    or 1 when seam_in is empty.

    Raises:
        CannotDominateError: If phi <= 1e-12 at a seam_in center
        SeamViolationError: If psi - c * phi < tol at a seam_out center
    """
    settings = get_settings()
    margin = settings.scaling_margin if margin is None else margin
    tol = settings.seam_tol if tol is None else tol
    c = 1.0
    if not seam_in.is_empty():
        centers = seam_in.centers()
        phi_in = phi.evaluate(centers)
        weak = phi_in <= POSITIVITY_FLOOR
        if weak.any():
            raise CannotDominateError(
                f"bump vanishes at seam voxel {_witness(seam_in, weak)}; shrink the second piece"
            )
        psi_in = _evaluate(psi, centers)
        c = float(max((1.0 + margin) * np.max(psi_in / phi_in), np.max((psi_in + tol) / phi_in)))
    if not seam_out.is_empty():
        centers = seam_out.centers()
        gap = _evaluate(psi, centers) - c * phi.evaluate(centers)
        bad = gap < tol
        if bad.any():
            raise SeamViolationError(
                f"scaled bump not dominated at seam voxel {_witness(seam_out, bad)} (c={c:.6g})"
            )
    logger.debug("Scaling constant %.6g over %d seam voxels", c, seam_in.count)
    return c


def glue_pair(
    phi1: ConstructedFunction,
    phi2: ConstructedFunction,
    K: VoxelSet,
    tolerance: float | None = None,
    V1: VoxelSet | None = None,
    V2: VoxelSet | None = None,
    step: int = 0,
) -> MaxNode:
    """Glue phi1 on V1 and phi2 on V2 into their max on the overlap.

    Args:
        phi1 (ConstructedFunction): First function, defined on its W
        phi2 (ConstructedFunction): Second function, defined on its W
        K (VoxelSet): Set to keep inside the result's neighborhood
        tolerance (float | None, optional): Required seam margin. Defaults to settings.seam_tol.
        V1 (VoxelSet | None, optional): First piece, a subset of phi1's W. Defaults to phi1.W.
        V2 (VoxelSet | None, optional): Second piece, a subset of phi2's W. Defaults to phi2.W.
        step (int, optional): Induction step recorded in the node. Defaults to 0.

    Returns:
        MaxNode: The glued function with neighborhood W

    Raises:
        CoverageError: If K is not inside V1 ∪ V2
        GlueError: If phi1 <= phi2 + tol on ∂V2 ∩ V1 ∩ K, or phi2 <= phi1 + tol
            on ∂V1 ∩ V2 ∩ K
    """
    tolerance = get_settings().seam_tol if tolerance is None else tolerance
    region = GlueRegion(phi1.W if V1 is None else V1, phi2.W if V2 is None else V2, K)
    if not region.covers():
        missing = K - (region.V1 | region.V2)
        raise CoverageError(f"{missing.count} voxels of K lie in neither piece")
    for seam, winner, loser, name in (
        (region.seam_out, phi1, phi2, "first"),
        (region.seam_in, phi2, phi1, "second"),
    ):
        if seam.is_empty():
            continue
        centers = seam.centers()
        lead = evaluate_constructed(winner, centers) - evaluate_constructed(loser, centers)
        bad = lead < tolerance
        if bad.any():
            witness = _witness(seam, bad)
            raise GlueError(f"{name} branch does not dominate at seam voxel {witness}", witness)
    W = region.neighborhood()
    logger.debug(
        "Glued pieces of %d and %d voxels into W of %d", region.V1.count, region.V2.count, W.count
    )
    return MaxNode(phi1, phi2, region.V1, region.V2, W, step)
