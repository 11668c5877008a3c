"""The flat cutoff, the half-space-flat surrogate and the hat bump built from them.

Model formulas, with w = z' - r e_1 and g = M_b + |w|^2:

    theta(t) = exp(K_g t - 1/t) for t > 0, else 0
    phi(w) = theta(Re w_1) * g
    psi(z) = (1 - |z''|^2) * phi(z' - r e_1) inside the filled hat, else 0
"""

import numpy as np

from src.bump.params import BumpParams
from src.config import get_settings
from src.core.fields import ScalarField
from src.core.geometry import as_points, to_complex
from src.errors import InputError, OrderError
from src.hats.pairs import HatPair


def theta_derivatives(t: np.ndarray, growth: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """theta, theta' and theta'' at every t (all zero for t <= 0)."""
    t = np.asarray(t, dtype=float)
    positive = t > 0
    safe = np.where(positive, t, 1.0)
    value = np.where(positive, np.exp(growth * safe - 1.0 / safe), 0.0)
    slope = growth + 1.0 / safe**2
    first = value * slope
    second = value * (slope**2 - 2.0 / safe**3)
    return value, np.where(positive, first, 0.0), np.where(positive, second, 0.0)


def theta(t: np.ndarray | float, growth: float) -> np.ndarray:
    """Flat cutoff exp(K_g t - 1/t), identically zero for t <= 0."""
    return theta_derivatives(t, growth)[0]


def _phi_model(w: np.ndarray, params: BumpParams) -> np.ndarray:
    g = params.offset + np.sum(np.abs(w) ** 2, axis=1)
    return theta(w[:, 0].real, params.growth) * g


def _phi_model_parts(
    w: np.ndarray, params: BumpParams
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Value, d/dw_j and Levi form of phi at complex points w, shapes (N,), (N, k), (N, k, k)."""
    k = w.shape[1]
    g = params.offset + np.sum(np.abs(w) ** 2, axis=1)
    th, th1, th2 = theta_derivatives(w[:, 0].real, params.growth)
    value = th * g
    grad = th[:, None] * w.conj()
    grad[:, 0] += 0.5 * th1 * g
    levi = th[:, None, None] * np.eye(k)[None, :, :]
    levi[:, 0, 0] += 0.25 * g * th2
    levi[:, 0, :] += 0.5 * th1[:, None] * w
    levi[:, :, 0] += 0.5 * th1[:, None] * w.conj()
    return value, grad, levi


def phi_tilde(points: np.ndarray, params: BumpParams | None = None) -> np.ndarray:
    """Surrogate theta(Re z'_1) (M_b + |z'|^2) at real-layout points of C^k."""
    params = params or BumpParams.from_settings()
    return _phi_model(to_complex(as_points(points)), params)


def phi_tilde_levi(points: np.ndarray, params: BumpParams | None = None) -> np.ndarray:
    """Analytic Levi form of the surrogate, (N, k, k)."""
    params = params or BumpParams.from_settings()
    return _phi_model_parts(to_complex(as_points(points)), params)[2]


def domination_margin(points: np.ndarray, params: BumpParams | None = None) -> np.ndarray:
    """theta theta'' M_b - theta'^2 |z'|^2, a sufficient-condition margin for strict psh."""
    params = params or BumpParams.from_settings()
    w = to_complex(as_points(points))
    th, th1, th2 = theta_derivatives(w[:, 0].real, params.growth)
    return th * th2 * params.offset - th1**2 * np.sum(np.abs(w) ** 2, axis=1)


def surrogate_field(params: BumpParams | None = None) -> ScalarField:
    """The surrogate as a field with its analytic Levi form."""
    params = params or BumpParams.from_settings()
    return ScalarField(
        evaluator=lambda p: phi_tilde(p, params),
        hessian=lambda p: phi_tilde_levi(p, params),
        name="phi_tilde",
    )


class _ModelBump:
    """psi_r on model coordinates for split k + (n - k)."""

    def __init__(self, n: int, k: int, r: float, params: BumpParams) -> None:
        self.n, self.k, self.r, self.params = n, k, r, params

    def _inside(self, z: np.ndarray) -> np.ndarray:
        head, tail = z[:, : self.k], z[:, self.k :]
        return (
            (np.linalg.norm(head, axis=1) < 1.0)
            & (head[:, 0].real > self.r)
            & np.all(np.abs(tail) < 1.0, axis=1)
        )

    def _shifted(self, z: np.ndarray) -> np.ndarray:
        w = z[:, : self.k].copy()
        w[:, 0] -= self.r
        return w

    def value(self, points: np.ndarray) -> np.ndarray:
        z = to_complex(as_points(points, 2 * self.n))
        out = np.zeros(len(z))
        inside = self._inside(z)
        if inside.any():
            zi = z[inside]
            factor = 1.0 - np.sum(np.abs(zi[:, self.k :]) ** 2, axis=1)
            out[inside] = factor * _phi_model(self._shifted(zi), self.params)
        return out

    def levi(self, points: np.ndarray) -> np.ndarray:
        z = to_complex(as_points(points, 2 * self.n))
        out = np.zeros((len(z), self.n, self.n), dtype=complex)
        inside = self._inside(z)
        if not inside.any():
            return out
        zi = z[inside]
        k = self.k
        value, grad, hess = _phi_model_parts(self._shifted(zi), self.params)
        factor = 1.0 - np.sum(np.abs(zi[:, k:]) ** 2, axis=1)
        # d/dz_j of the factor is -conj(z''_j) on the tail block
        d_factor = np.zeros_like(zi)
        d_factor[:, k:] = -zi[:, k:].conj()
        d_phi = np.zeros_like(zi)
        d_phi[:, :k] = grad
        block = np.zeros((len(zi), self.n, self.n), dtype=complex)
        block[:, :k, :k] = factor[:, None, None] * hess
        tail = np.arange(k, self.n)
        block[:, tail, tail] -= value[:, None]
        block += np.einsum("nj,nk->njk", d_factor, d_phi.conj())
        block += np.einsum("nj,nk->njk", d_phi, d_factor.conj())
        out[inside] = block
        return out


def psi_r(points: np.ndarray, r: float, q: int, params: BumpParams | None = None) -> np.ndarray:
    """(1 - |z''|^2) phi(z' - r e_1) on the open filled model hat, 0 elsewhere.

    z' holds the first n - q + 1 coordinates.
    """
    points = as_points(points)
    n = points.shape[1] // 2
    if not 1 <= q <= n:
        raise OrderError(f"q={q} outside [1, {n}]")
    if not 0.0 < r < 1.0:
        raise InputError(f"r={r} must lie in (0, 1)")
    return _ModelBump(n, n - q + 1, r, params or BumpParams.from_settings()).value(points)


def hat_bump(
    pair: HatPair, q: int, params: BumpParams | None = None, tube: float | None = None
) -> ScalarField:
    """psi_r pushed onto a hat pair: x -> psi_r(Phi^{-1}(x)), with its analytic Levi form.

    The field is undefined within `tube` of the surface S, where it jumps.

    Raises:
        OrderError: If the pair's order is not n - q + 1
    """
    n = pair.n
    if pair.k != n - q + 1:
        raise OrderError(f"hat of order {pair.k} cannot carry a {q}-convex bump in C^{n}")
    params = params or BumpParams.from_settings()
    tube = get_settings().exclusion_tube if tube is None else tube
    model = _ModelBump(n, pair.k, pair.r, params)
    model_field = ScalarField(model.value, model.levi, name="psi_r")
    pulled = model_field.pullback(pair.embedding.inverse())
    return ScalarField(
        evaluator=pulled.evaluator,
        hessian=pulled.hessian,
        domain=lambda p: pair.surface_distance(p) >= tube,
        name=f"bump[{pair.label or 'hat'}]",
    )