"""Seeded finite families of spherical hat pairs."""

import itertools
import logging

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

from src.core.ambient import AmbientDomain
from src.core.geometry import AffineMap, ChartBox, random_unitary, to_complex
from src.core.parallel import parallel_map
from src.errors import OrderError
from src.hats.pairs import HatPair, axis_unitary
from src.hats.voxelize import valid_in_ambient

logger = logging.getLogger(__name__)


class HatFamily(BaseModel):
    """Generation parameters for a finite family of hat pairs.

    Centers form the sub-grid midpoint + j * center_stride (strictly inside the box).
    Enumeration order is centers (lexicographic), then scales, radii and directions.
    """

    model_config = ConfigDict(extra="forbid")

    q: int = Field(default=1, ge=1)
    center_stride: float = Field(default=1.0, gt=0)
    radii: list[float] = Field(default_factory=lambda: [0.1, 0.5])
    scales: list[float] = Field(default_factory=lambda: [0.5, 1.0, 1.5, 1.9])
    axis_directions: bool = True
    random_directions: int = Field(default=0, ge=0)
    mu: float = Field(default=0.05, gt=0)
    seed: int = 0

    @field_validator("radii")
    @classmethod
    def _radii_in_unit_interval(cls, radii: list[float]) -> list[float]:
        if any(not 0.0 < r < 1.0 for r in radii):
            raise ValueError("radii must lie in (0, 1)")
        return radii

    @field_validator("scales")
    @classmethod
    def _scales_positive(cls, scales: list[float]) -> list[float]:
        if any(s <= 0 for s in scales):
            raise ValueError("scales must be positive")
        return scales

    def order(self, n: int) -> int:
        """Hat order n - q + 1 used for q-pseudoconcavity in C^n."""
        if not 1 <= self.q <= n:
            raise OrderError(f"q={self.q} outside [1, {n}]")
        return n - self.q + 1


def family_centers(config: HatFamily, box: ChartBox) -> np.ndarray:
    """Real-layout centers of the family, lexicographic in the real axes."""
    axes = []
    for axis in range(box.ndim):
        mid = box.midpoint[axis]
        reach = int(np.floor((box.upper[axis] - mid) / config.center_stride)) + 1
        steps = mid + np.arange(-reach, reach + 1) * config.center_stride
        axes.append(steps[(steps > box.lower[axis]) & (steps < box.upper[axis])])
    return np.array(list(itertools.product(*axes)))


def family_directions(config: HatFamily, n: int) -> list[np.ndarray]:
    """Unitaries carrying e_1 to each cap direction: signed real and imaginary axes, then random."""
    directions: list[np.ndarray] = []
    if config.axis_directions:
        for axis in range(n):
            for imaginary in (False, True):
                for sign in (1, -1):
                    directions.append(axis_unitary(n, axis, sign, imaginary))
    rng = np.random.default_rng(config.seed)
    directions.extend(random_unitary(n, rng) for _ in range(config.random_directions))
    return directions


def enumerate_candidates(config: HatFamily, box: ChartBox) -> list[HatPair]:
    """All pairs the configuration describes on a box, before the validity filter."""
    n = box.dimension
    k = config.order(n)
    directions = family_directions(config, n)
    candidates = []
    for c, center in enumerate(family_centers(config, box)):
        offset = to_complex(center)
        for scale in config.scales:
            for r in config.radii:
                for d, unitary in enumerate(directions):
                    embedding = AffineMap.similarity(unitary, scale, offset)
                    label = f"c{c}-s{scale:g}-r{r:g}-d{d}"
                    candidates.append(HatPair(k, r, embedding, config.mu, label))
    return candidates


def generate_family(config: HatFamily, ambient: AmbientDomain) -> list[HatPair]:
    """Deterministic family of hat pairs of order n - q + 1 that are valid in the ambient.

    Args:
        config (HatFamily): Generation parameters
        ambient (AmbientDomain): Domain every pair must fit in

    Returns:
        list[HatPair]: Valid pairs in enumeration order; may be empty
    """
    candidates = enumerate_candidates(config, ambient.box)
    valid = parallel_map(lambda pair: valid_in_ambient(pair, ambient), candidates)
    family = [pair for pair, ok in zip(candidates, valid, strict=True) if ok]
    if not family:
        logger.warning("Hat family is empty: none of %d candidates fits", len(candidates))
    else:
        logger.info("Generated hat family: %d of %d candidates valid", len(family), len(candidates))
    return family
