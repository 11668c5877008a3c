"""Spherical cuts and chained cut sequences on voxel sets."""

import logging
from collections.abc import Sequence
from dataclasses import dataclass, field

from src.core.ambient import AmbientDomain
from src.core.voxels import VoxelSet
from src.errors import BoxMismatchError, InputError, InvalidCutError, OrderError
from src.hats.pairs import HatPair
from src.hats.voxelize import HatVoxels, mark_cells, valid_in_ambient

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CutRecord:
    """One applied cut: after = before minus the pair's conservative interior cells."""

    pair: HatPair
    before: VoxelSet
    after: VoxelSet
    removed_count: int


@dataclass
class CutSequence:
    """Chain K = K_0 ⊇ K_1 ⊇ ... of cuts of one order, plus the pairs skipped as invalid."""

    initial: VoxelSet
    q: int
    records: list[CutRecord] = field(default_factory=list)
    skipped: list[HatPair] = field(default_factory=list)

    @property
    def residual(self) -> VoxelSet:
        return self.records[-1].after if self.records else self.initial

    @property
    def pairs(self) -> list[HatPair]:
        return [record.pair for record in self.records]

    @property
    def removed_total(self) -> int:
        return sum(record.removed_count for record in self.records)

    @property
    def order(self) -> int:
        return self.initial.box.dimension - self.q + 1

    def append(self, record: CutRecord) -> None:
        if record.before != self.residual:
            raise InputError("cut record does not continue the chain")
        self.records.append(record)


def misses_surface(K: VoxelSet, pair: HatPair) -> bool:
    """Whether the one-diagonal dilation of the pair's surface meets no occupied cell of K."""
    return mark_cells(pair, HatVoxels.S_DILATED, K).is_empty()


def is_valid_cut(K: VoxelSet, pair: HatPair, ambient: AmbientDomain) -> bool:
    """A cut is valid when the pair fits the ambient and its surface avoids K.

    Raises:
        BoxMismatchError: If K and the ambient live on different boxes
    """
    if K.box != ambient.box:
        raise BoxMismatchError("K and the ambient live on different boxes")
    return valid_in_ambient(pair, ambient) and misses_surface(K, pair)


def cut(K: VoxelSet, pair: HatPair) -> CutRecord:
    """Remove the pair's conservative interior from K without any validity check."""
    removed = mark_cells(pair, HatVoxels.INTERIOR_CONSERVATIVE, K)
    after = K.difference(removed)
    return CutRecord(pair, K, after, removed.count)


def apply_cut(K: VoxelSet, pair: HatPair, ambient: AmbientDomain) -> CutRecord:
    """Apply one spherical cut.

    Raises:
        InvalidCutError: If the cut is not valid for K in the ambient
    """
    if not is_valid_cut(K, pair, ambient):
        raise InvalidCutError(f"cut by hat {pair.label or '<unnamed>'} is not valid")
    record = cut(K, pair)
    logger.debug("Cut %s removed %d voxels", pair.label, record.removed_count)
    return record


def _order_q(K: VoxelSet, pairs: Sequence[HatPair], q: int | None) -> int:
    n = K.box.dimension
    if q is None:
        q = n - pairs[0].k + 1 if pairs else 1
    for pair in pairs:
        if pair.k != n - q + 1:
            raise OrderError(f"hat {pair.label} has order {pair.k}, expected {n - q + 1}")
    return q


def apply_sequence(
    K: VoxelSet, pairs: Sequence[HatPair], ambient: AmbientDomain, q: int | None = None
) -> CutSequence:
    """Apply pairs in order, skipping the invalid ones.

    Args:
        K (VoxelSet): Initial set
        pairs (Sequence[HatPair]): Pairs of one order, in application order
        ambient (AmbientDomain): Ambient every cut must be valid in
        q (int | None, optional): Order parameter; inferred from the pairs when omitted

    Returns:
        CutSequence: The chain, with invalid pairs listed in `skipped`
    """
    sequence = CutSequence(K, _order_q(K, pairs, q))
    for pair in pairs:
        current = sequence.residual
        if not is_valid_cut(current, pair, ambient):
            sequence.skipped.append(pair)
            continue
        sequence.append(cut(current, pair))
    if sequence.skipped:
        logger.info("Skipped %d invalid cuts out of %d", len(sequence.skipped), len(pairs))
    return sequence


def intersect_in_family(s1: CutSequence, s2: CutSequence) -> CutSequence:
    """Chain s2's cuts after s1's, reaching residual(s1) ∩ residual(s2).

    Every cut of s2 stays valid on the smaller set, since validity only depends on
    the surface missing K and the ambient.

    Raises:
        InputError: If the sequences start from different sets or have different q
    """
    if s1.initial != s2.initial or s1.q != s2.q:
        raise InputError("sequences must share the initial set and q")
    if not s2.records:
        return s1
    merged = CutSequence(s1.initial, s1.q, list(s1.records), list(s1.skipped))
    for record in s2.records:
        current = merged.residual
        if not misses_surface(current, record.pair):
            raise InvalidCutError(f"hat {record.pair.label} lost validity on a smaller set")
        merged.append(cut(current, record.pair))
    return merged
