"""Spherical hat pairs: membership, distances and support functions.

A hat pair of order k is the image under a complex-affine embedding of the model
sets S = {|z'| = 1, Re z'_1 >= r} x D and S_hat = {|z'| <= 1, Re z'_1 >= r} x D,
where z' holds the first k coordinates and D is the unit polydisc in the
remaining n - k.
"""

from dataclasses import dataclass
from enum import IntEnum

import numpy as np

from src.core.geometry import AffineMap, as_points, to_complex, to_real
from src.errors import InputError, OrderError

MEMBERSHIP_TOL = 1e-9


class HatRegion(IntEnum):
    """Where a point sits relative to a hat pair."""

    OUTSIDE = 0
    IN_S = 1
    FLAT_BOUNDARY = 2
    INTERIOR = 3


@dataclass(frozen=True)
class HatPair:
    """Spherical hat pair of order k with cap parameter r and neighborhood margin mu."""

    k: int
    r: float
    embedding: AffineMap
    mu: float = 0.05
    label: str = ""

    def __post_init__(self) -> None:
        if not 1 <= self.k <= self.embedding.dimension:
            raise OrderError(f"order {self.k} outside [1, {self.embedding.dimension}]")
        if not 0.0 < self.r < 1.0:
            raise InputError(f"cap parameter r={self.r} must lie in (0, 1)")
        if self.mu <= 0.0:
            raise InputError("margin mu must be positive")

    @property
    def n(self) -> int:
        return self.embedding.dimension

    @property
    def rim_radius(self) -> float:
        return float(np.sqrt(1.0 - self.r**2))

    def with_embedding(self, embedding: AffineMap) -> "HatPair":
        return HatPair(self.k, self.r, embedding, self.mu, self.label)

    def model(self, points: np.ndarray) -> np.ndarray:
        """Model coordinates Phi^{-1}(p), complex (N, n)."""
        return self.embedding.backward_complex(to_complex(as_points(points, 2 * self.n)))

    def to_ambient(self, model: np.ndarray) -> np.ndarray:
        """Real-layout image of complex model points."""
        return to_real(self.embedding.forward_complex(model))

    def classify(self, points: np.ndarray, tol: float = MEMBERSHIP_TOL) -> np.ndarray:
        """HatRegion code per point."""
        w = self.model(points)
        head, tail = w[:, : self.k], w[:, self.k :]
        norm = np.linalg.norm(head, axis=1)
        re1 = head[:, 0].real
        poly = np.all(np.abs(tail) < 1.0, axis=1)
        on_sphere = (np.abs(norm - 1.0) <= tol) & (re1 >= self.r - tol) & poly
        flat = (np.abs(re1 - self.r) <= tol) & (norm <= 1.0 + tol) & poly & ~on_sphere
        interior = (norm < 1.0 - tol) & (re1 > self.r + tol) & poly
        codes = np.full(len(w), HatRegion.OUTSIDE, dtype=int)
        codes[interior] = HatRegion.INTERIOR
        codes[flat] = HatRegion.FLAT_BOUNDARY
        codes[on_sphere] = HatRegion.IN_S
        return codes

    def in_filled(self, points: np.ndarray) -> np.ndarray:
        return self.classify(points) != HatRegion.OUTSIDE

    def in_interior(self, points: np.ndarray) -> np.ndarray:
        return self.classify(points) == HatRegion.INTERIOR

    def on_surface(self, points: np.ndarray) -> np.ndarray:
        return self.classify(points) == HatRegion.IN_S

    def surface_distance(self, points: np.ndarray) -> np.ndarray:
        """Lower bound on the Euclidean distance from each point to S (closure)."""
        w = self.model(points)
        head = to_real(w[:, : self.k])
        norm = np.linalg.norm(head, axis=1)
        safe = np.where(norm > 0, norm, 1.0)
        in_cap = (head[:, 0] / safe >= self.r) & (norm > 0)
        rest = np.linalg.norm(head[:, 1:], axis=1)
        rim = np.hypot(head[:, 0] - self.r, rest - self.rim_radius)
        d_head = np.where(in_cap, np.abs(norm - 1.0), rim)
        d_head = np.where(norm > 0, d_head, 1.0)
        d_tail = _polydisc_excess(w[:, self.k :], 1.0)
        return self.embedding.smallest_singular_value * np.hypot(d_head, d_tail)

    def filled_distance(self, points: np.ndarray, scale: float = 1.0) -> np.ndarray:
        """Lower bound on the distance to the image of scale * (S_hat x closed D)."""
        w = self.model(points) / scale
        head = to_real(w[:, : self.k])
        x0 = head[:, 0]
        norm = np.linalg.norm(head, axis=1)
        rest = np.linalg.norm(head[:, 1:], axis=1)
        rim = np.hypot(x0 - self.r, rest - self.rim_radius)
        safe = np.where(norm > 0, norm, 1.0)
        above = np.where(
            norm <= 1.0, 0.0, np.where(x0 / safe >= self.r, norm - 1.0, rim)
        )
        below = np.where(rest <= self.rim_radius, self.r - x0, rim)
        d_head = np.where(x0 >= self.r, above, below)
        d_tail = _polydisc_excess(w[:, self.k :], 1.0)
        return scale * self.embedding.smallest_singular_value * np.hypot(d_head, d_tail)

    def _model_support(self, directions: np.ndarray) -> np.ndarray:
        """Support function of S_hat x closed D in model real layout, one value per row."""
        head = directions[:, : 2 * self.k]
        tail = directions[:, 2 * self.k :]
        g0 = head[:, 0]
        g_norm = np.linalg.norm(head, axis=1)
        g_rest = np.linalg.norm(head[:, 1:], axis=1)
        inside = g0 >= self.r * g_norm
        h_head = np.where(inside, g_norm, self.r * g0 + self.rim_radius * g_rest)
        h_tail = np.hypot(tail[:, 0::2], tail[:, 1::2]).sum(axis=1) if tail.size else 0.0
        return h_head + h_tail

    def bounds(self, scale: float = 1.0, pad: float = 0.0) -> tuple[np.ndarray, np.ndarray]:
        """Exact axis-aligned bounding box of the image of scale * (S_hat x closed D).

        Args:
            scale (float, optional): Model scale factor. Defaults to 1.0.
            pad (float, optional): Extra margin on every side. Defaults to 0.0.

        Returns:
            tuple[np.ndarray, np.ndarray]: Lower and upper corners in real layout
        """
        a = self.embedding.linear
        n = self.n
        rows = np.zeros((2 * n, 2 * n))
        rows[0::2, 0::2] = a.real
        rows[0::2, 1::2] = -a.imag
        rows[1::2, 0::2] = a.imag
        rows[1::2, 1::2] = a.real
        center = to_real(self.embedding.offset)
        upper = center + scale * self._model_support(rows) + pad
        lower = center - scale * self._model_support(-rows) - pad
        return lower, upper

    def apex(self) -> np.ndarray:
        """Image of the cap apex (1', 0)."""
        model = np.zeros((1, self.n), dtype=complex)
        model[0, 0] = 1.0
        return self.to_ambient(model)[0]


def _polydisc_excess(tail: np.ndarray, radius: float) -> np.ndarray:
    if tail.shape[1] == 0:
        return np.zeros(len(tail))
    excess = np.maximum(np.abs(tail) - radius, 0.0)
    return np.linalg.norm(excess, axis=1)


def hat_membership(pair: HatPair, point: np.ndarray) -> HatRegion:
    """Classify one point against a hat pair."""
    return HatRegion(int(pair.classify(point)[0]))


def axis_unitary(n: int, axis: int, sign: int, imaginary: bool) -> np.ndarray:
    """Unitary sending e_1 to sign * e_axis (times i when imaginary), a signed swap."""
    phase = sign * (1j if imaginary else 1.0)
    unitary = np.eye(n, dtype=complex)
    if axis != 0:
        unitary[:, [0, axis]] = unitary[:, [axis, 0]]
    unitary[:, 0] *= phase
    return unitary
