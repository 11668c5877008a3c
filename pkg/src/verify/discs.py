"""Sweeps of analytic discs A_t through a base point, looking for first contact."""

import logging
from dataclasses import dataclass, field

import numpy as np

from src.core import sampling
from src.core.geometry import AffineMap, to_real
from src.errors import InputError
from src.schemas.reports import Verdict
from src.verify.domains import DomainSpec

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DiscFamily:
    """Discs A_t = {(t + i Im p_1, z') : t^2 + (Im p_1)^2 + |z'|^2 < 1} x {p''}.

    p splits as (p_1, p', p'') with p' holding coordinates 2..n-q+1; the family
    runs over t in [Re p_1, sqrt(1 - (Im p_1)^2)]. Model coordinates are mapped to
    C^n by `embedding`.
    """

    p: np.ndarray
    q: int
    t_steps: int = 64
    disc_samples: int = 256
    seed: int = 0
    embedding: AffineMap | None = field(default=None)

    def __post_init__(self) -> None:
        p = np.asarray(self.p, dtype=complex).ravel()
        object.__setattr__(self, "p", p)
        if not 1 <= self.q < len(p):
            raise InputError(f"q={self.q} outside [1, {len(p) - 1}]")
        if p[0].imag ** 2 >= 1.0:
            raise InputError("(Im p_1)^2 must be below 1")
        if self.t0 > self.t1:
            raise InputError("Re p_1 exceeds the top of the t-range")
        if self.t_steps < 1 or self.disc_samples < 1:
            raise InputError("sample counts must be positive")

    @property
    def n(self) -> int:
        return len(self.p)

    @property
    def t0(self) -> float:
        return float(self.p[0].real)

    @property
    def t1(self) -> float:
        return float(np.sqrt(1.0 - self.p[0].imag ** 2))

    def t_values(self) -> np.ndarray:
        """Descending t grid; doubling t_steps refines it."""
        return np.linspace(self.t1, self.t0, self.t_steps + 1)

    def radius(self, t: float) -> float:
        return float(np.sqrt(max(1.0 - t**2 - self.p[0].imag ** 2, 0.0)))

    def _points(self, t: float, directions: np.ndarray) -> np.ndarray:
        width = self.n - self.q
        z = np.empty((len(directions), self.n), dtype=complex)
        z[:, 0] = t + 1j * self.p[0].imag
        z[:, 1 : width + 1] = self.radius(t) * directions
        z[:, width + 1 :] = self.p[width + 1 :]
        if self.embedding is not None:
            z = self.embedding.forward_complex(z)
        return to_real(z)

    def disc(self, t: float) -> np.ndarray:
        """Samples of A_t, the center first."""
        width = self.n - self.q
        unit = sampling.ball(width, self.disc_samples - 1, self.seed)
        return self._points(t, np.concatenate([np.zeros((1, width), dtype=complex), unit]))

    def rim(self, t: float) -> np.ndarray:
        """Samples of the boundary of A_t."""
        return self._points(t, sampling.sphere(self.n - self.q, self.disc_samples, self.seed + 1))


def disc_family_sweep(omega: DomainSpec, fam: DiscFamily) -> Verdict:
    """Scan t downward from t_1 and report the first disc with a sample outside Omega.

    Raises:
        InputError: If a sampled disc boundary leaves Omega
    """
    params = {"t0": fam.t0, "t1": fam.t1, "t_steps": fam.t_steps, "seed": fam.seed}
    if fam.t0 == fam.t1:
        return Verdict(probe="disc_sweep", params=params, verdict="no_contact", note="empty range")
    ts = fam.t_values()
    for t in ts:
        rim = fam.rim(t)
        if not omega.contains(rim).all():
            raise InputError(f"boundary of the disc at t={t:.6g} leaves {omega.name}")
    for t in ts:
        disc = fam.disc(t)
        outside = ~omega.contains(disc)
        if outside.any():
            logger.info("Disc sweep: first contact at t=%.6g", t)
            return Verdict(
                probe="disc_sweep",
                params=params,
                verdict="first_contact",
                witness=disc[np.argmax(outside)].tolist(),
                margins={"t_contact": float(t)},
            )
    return Verdict(probe="disc_sweep", params=params, verdict="no_contact")
