"""Euclidean Hartogs figures inside the unit polydisc."""

from dataclasses import dataclass

import numpy as np

from src.core import sampling
from src.core.geometry import as_points, to_complex
from src.errors import InputError


@dataclass(frozen=True)
class HartogsFigure:
    """(k, m)-Hartogs figure: points of the unit polydisc with a thin head or a fat tail.

    Membership: |(z_1..z_k)|_inf < r or |(z_{k+1}..z_n)|_inf > s.
    """

    k: int
    m: int
    r: float
    s: float

    def __post_init__(self) -> None:
        if self.k < 1 or self.m < 1:
            raise InputError("both blocks of a Hartogs figure need positive dimension")
        if not (0.0 < self.r < 1.0 and 0.0 < self.s < 1.0):
            raise InputError("Hartogs radii must lie in (0, 1)")

    @property
    def n(self) -> int:
        return self.k + self.m

    def contains(self, points: np.ndarray) -> np.ndarray:
        """Membership of model points given in real layout."""
        z = np.abs(to_complex(as_points(points, 2 * self.n)))
        in_polydisc = np.all(z < 1.0, axis=1)
        thin = z[:, : self.k].max(axis=1) < self.r
        fat = z[:, self.k :].max(axis=1) > self.s
        return in_polydisc & (thin | fat)

    def sample(self, count: int, seed: int) -> np.ndarray:
        """Complex model samples covering both clauses, (count, n)."""
        half = count // 2
        thin = np.concatenate(
            [
                sampling.polydisc(self.k, half, seed, self.r),
                sampling.polydisc(self.m, half, seed + 1),
            ],
            axis=1,
        )
        rest = count - half
        fat = np.concatenate(
            [
                sampling.polydisc(self.k, rest, seed + 2),
                sampling.annulus(self.m, rest, seed + 3, self.s),
            ],
            axis=1,
        )
        return np.concatenate([thin, fat])


def hartogs_membership(fig: HartogsFigure, point: np.ndarray) -> bool:
    """Exact membership of one model point."""
    return bool(fig.contains(point)[0])
