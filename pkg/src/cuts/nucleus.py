"""Greedy fixed-point approximation of the q-nucleus.

The residual is an upper bound: a finite family can only prove voxels removable.
"""

import logging
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from src.config import get_settings
from src.core.ambient import AmbientDomain
from src.core.geometry import ChartBox, GridSymmetry
from src.core.parallel import parallel_map
from src.core.voxels import PointPredicate, VoxelSet, VoxelizeMode, cells_within, voxelize
from src.cuts.sequence import CutSequence, cut, misses_surface
from src.errors import InputError, OrderError
from src.hats.family import HatFamily, generate_family
from src.hats.pairs import HatPair
from src.hats.voxelize import valid_in_ambient
from src.schemas.reports import Verdict

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class NucleusResult:
    """Residual of the greedy sweep and the productive cuts that produced it."""

    residual: VoxelSet
    sequence: CutSequence
    iterations: int
    converged: bool
    family_size: int
    family_seed: int | None = None


def resolve_family(
    family: HatFamily | Sequence[HatPair], q: int, ambient: AmbientDomain
) -> list[HatPair]:
    """Valid pairs of order n - q + 1 from a config or an explicit list.

    Raises:
        OrderError: If the config or a listed pair has the wrong order
    """
    n = ambient.box.dimension
    if isinstance(family, HatFamily):
        if family.q != q:
            raise OrderError(f"family built for q={family.q}, run asks q={q}")
        return generate_family(family, ambient)
    pairs = list(family)
    for pair in pairs:
        if pair.k != n - q + 1:
            raise OrderError(f"hat {pair.label} has order {pair.k}, expected {n - q + 1}")
    valid = parallel_map(lambda pair: valid_in_ambient(pair, ambient), pairs)
    return [pair for pair, ok in zip(pairs, valid, strict=True) if ok]


def approximate_nucleus(
    K: VoxelSet,
    q: int,
    family: HatFamily | Sequence[HatPair],
    ambient: AmbientDomain,
    max_iter: int | None = None,
    sweep_order: Sequence[int] | None = None,
) -> NucleusResult:
    """Sweep the family, applying every valid productive cut, until nothing changes.

    Args:
        K (VoxelSet): Compact set on the ambient's box
        q (int): Order parameter; hats have order n - q + 1
        family (HatFamily | Sequence[HatPair]): Family config or explicit pairs
        ambient (AmbientDomain): Ambient domain
        max_iter (int | None, optional): Sweep cap. Defaults to settings.max_iter.
        sweep_order (Sequence[int] | None, optional): Permutation of the valid family
            giving the order cuts are tried in each sweep. Defaults to enumeration order.

    Returns:
        NucleusResult: Residual, productive cuts, sweep count and convergence flag
    """
    if K.box != ambient.box:
        raise InputError("K and the ambient live on different boxes")
    max_iter = get_settings().max_iter if max_iter is None else max_iter
    pairs = resolve_family(family, q, ambient)
    if sweep_order is not None:
        if sorted(sweep_order) != list(range(len(pairs))):
            raise InputError("sweep order must be a permutation of the family")
        pairs = [pairs[i] for i in sweep_order]
    seed = family.seed if isinstance(family, HatFamily) else None
    sequence = CutSequence(K, q)
    iterations = 0
    converged = K.is_empty()
    while not converged and iterations < max_iter:
        iterations += 1
        start = sequence.residual
        valid = parallel_map(lambda pair: misses_surface(start, pair), pairs)
        for pair, ok in zip(pairs, valid, strict=True):
            if not ok:
                continue
            record = cut(sequence.residual, pair)
            if record.removed_count:
                sequence.append(record)
                logger.debug(
                    "Sweep %d: %s removed %d", iterations, pair.label, record.removed_count
                )
        removed = start.count - sequence.residual.count
        logger.info(
            "Sweep %d removed %d voxels, %d remain", iterations, removed, sequence.residual.count
        )
        converged = removed == 0 or sequence.residual.is_empty()
    if not converged:
        logger.warning("Nucleus sweep stopped at the iteration cap (%d)", max_iter)
    return NucleusResult(sequence.residual, sequence, iterations, converged, len(pairs), seed)


def exhaustion(final: ChartBox, depth: int, growth: float) -> list[ChartBox]:
    """Concentric boxes K_1 ⊂ ... ⊂ K_depth = final, each `growth` times the previous."""
    if depth < 1 or growth <= 1.0:
        raise InputError("exhaustion needs depth >= 1 and growth > 1")
    half = (np.array(final.upper) - np.array(final.lower)) / 2.0
    boxes = []
    for level in range(depth - 1, -1, -1):
        reach = half / growth**level
        boxes.append(
            ChartBox(tuple(final.midpoint - reach), tuple(final.midpoint + reach), final.resolution)
        )
    return boxes


def _nested(inner: ChartBox, outer: ChartBox) -> bool:
    return all(a >= b for a, b in zip(inner.lower, outer.lower, strict=True)) and all(
        a <= b for a, b in zip(inner.upper, outer.upper, strict=True)
    )


def nucleus_closed(
    A: PointPredicate | VoxelSet,
    q: int,
    family: HatFamily | Sequence[HatPair],
    ambient: AmbientDomain,
    boxes: Sequence[ChartBox],
    max_iter: int | None = None,
) -> VoxelSet:
    """Union over a finite exhaustion of the nuclei of A ∩ K_k, on the ambient's box.

    Each stage K_k is rendered as the cells of the ambient box lying inside boxes[k].
    The countable union is truncated at len(boxes) stages.

    Raises:
        InputError: If the exhaustion is empty or not nested
    """
    if not boxes:
        raise InputError("exhaustion needs at least one box")
    for inner, outer in zip(boxes, boxes[1:], strict=False):
        if not _nested(inner, outer):
            raise InputError("exhaustion boxes must be nested")
    box = ambient.box
    if isinstance(A, VoxelSet):
        closed = A
    else:
        closed = voxelize(A, box, VoxelizeMode.CENTERS)
    closed = closed & ambient.allowed
    pairs = resolve_family(family, q, ambient)
    union = VoxelSet.empty(box)
    for level, stage_box in enumerate(boxes, start=1):
        stage = closed & cells_within(box, stage_box)
        result = approximate_nucleus(stage, q, pairs, ambient, max_iter)
        logger.info(
            "Exhaustion stage %d: %d voxels, residual %d",
            level,
            stage.count,
            result.residual.count,
        )
        union = union | result.residual
    return union


def monotonicity_check(
    K: VoxelSet,
    L: VoxelSet,
    q: int,
    family: HatFamily | Sequence[HatPair],
    ambient: AmbientDomain,
    max_iter: int | None = None,
) -> Verdict:
    """Check residual(K) ⊆ residual(L) for K ⊆ L under one shared family.

    Raises:
        InputError: If K is not a subset of L
    """
    if not K.issubset(L):
        raise InputError("monotonicity needs K ⊆ L")
    pairs = resolve_family(family, q, ambient)
    small = approximate_nucleus(K, q, pairs, ambient, max_iter).residual
    large = approximate_nucleus(L, q, pairs, ambient, max_iter).residual
    extra = small - large
    witness = extra.centers()[0].tolist() if not extra.is_empty() else None
    return Verdict(
        probe="monotonicity",
        params={"q": q, "family_size": len(pairs)},
        verdict="pass" if witness is None else "fail",
        witness=witness,
        margins={"residual_small": float(small.count), "residual_large": float(large.count)},
    )


def transport_problem(
    symmetry: GridSymmetry, K: VoxelSet, ambient: AmbientDomain, pairs: Sequence[HatPair]
) -> tuple[VoxelSet, AmbientDomain, list[HatPair]]:
    """Move K, the ambient and every hat embedding by one grid symmetry."""
    moved = VoxelSet(K.box, symmetry.apply_to_array(K.occupancy))
    chart = symmetry.affine_map()
    moved_pairs = [pair.with_embedding(chart.compose(pair.embedding)) for pair in pairs]
    return moved, ambient.transported(symmetry), moved_pairs


def nucleus_of_compact_ambient(ambient: AmbientDomain) -> VoxelSet:
    """The nucleus of a compact ambient manifold is the manifold itself."""
    if not ambient.compact:
        raise InputError("ambient is not flagged compact")
    return ambient.allowed
