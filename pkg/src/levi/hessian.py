"""Complex Hessians (Levi forms) from analytic formulas or central differences."""

import logging
from functools import cache

import numpy as np

from src.core.fields import ScalarField
from src.core.geometry import as_points
from src.errors import DomainError, InputError
from src.levi.forms import HermitianForm

logger = logging.getLogger(__name__)


@cache
def _stencil(ndim: int) -> tuple[np.ndarray, list[tuple[int, int, int, int, int]]]:
    """Unit offsets of the second-difference stencil and, per partial (a, b), its slots.

    Slot 0 is the center value shared by every pure second partial.
    """
    offsets = [np.zeros(ndim)]
    recipe = []
    for a in range(ndim):
        for b in range(a, ndim):
            if a == b:
                plus = np.zeros(ndim)
                plus[a] = 1.0
                offsets.extend([plus, -plus])
                recipe.append((a, b, len(offsets) - 2, len(offsets) - 1, -1))
            else:
                start = len(offsets)
                for sa in (1.0, -1.0):
                    for sb in (1.0, -1.0):
                        step = np.zeros(ndim)
                        step[a] = sa
                        step[b] = sb
                        offsets.append(step)
                recipe.append((a, b, start, start + 3, start + 1))
    return np.array(offsets), recipe


def real_hessians(
    field: ScalarField, points: np.ndarray, step: float
) -> tuple[np.ndarray, np.ndarray]:
    """Real 2n x 2n Hessians by central differences at every point that allows the stencil.

    Pure partials use the 3-point stencil, mixed partials the 4-point stencil.

    Args:
        field (ScalarField): Field to differentiate
        points (np.ndarray): Batch (N, 2n)
        step (float): Difference step h > 0

    Returns:
        tuple[np.ndarray, np.ndarray]: Hessians (N, 2n, 2n), NaN where undefined, and the
            mask of points whose whole stencil lies in the field's domain
    """
    if step <= 0:
        raise InputError("difference step must be positive")
    points = as_points(points)
    count, ndim = points.shape
    offsets, recipe = _stencil(ndim)
    stencil = points[:, None, :] + step * offsets[None, :, :]
    flat = stencil.reshape(-1, ndim)
    ok = field.defined(flat).reshape(count, -1).all(axis=1)
    hessians = np.full((count, ndim, ndim), np.nan)
    if not ok.any():
        return hessians, ok
    values = np.asarray(field.evaluator(stencil[ok].reshape(-1, ndim)), dtype=float)
    values = values.reshape(int(ok.sum()), len(offsets))
    center = values[:, 0]
    local = np.empty((len(values), ndim, ndim))
    for a, b, first, second, third in recipe:
        if a == b:
            entry = (values[:, first] - 2.0 * center + values[:, second]) / step**2
        else:
            # first=(+,+), second=(-,-), third=(+,-); (-,+) sits at first + 2
            entry = (
                values[:, first] - values[:, third] - values[:, first + 2] + values[:, second]
            ) / (4.0 * step**2)
        local[:, a, b] = entry
        local[:, b, a] = entry
    hessians[ok] = local
    return hessians, ok


def complex_from_real(hessians: np.ndarray) -> np.ndarray:
    """Assemble d^2/dz_j dzbar_k from real second partials (Wirtinger calculus)."""
    xx = hessians[..., 0::2, 0::2]
    yy = hessians[..., 1::2, 1::2]
    xy = hessians[..., 0::2, 1::2]
    yx = hessians[..., 1::2, 0::2]
    return 0.25 * ((xx + yy) + 1j * (xy - yx))


def finite_difference_levi(
    field: ScalarField, points: np.ndarray, step: float
) -> tuple[np.ndarray, np.ndarray]:
    """Finite-difference complex Hessians (N, n, n) and the defined mask."""
    hessians, ok = real_hessians(field, points, step)
    return complex_from_real(hessians), ok


def levi_matrices(
    field: ScalarField, points: np.ndarray, step: float, prefer_analytic: bool = True
) -> tuple[np.ndarray, np.ndarray]:
    """Complex Hessians for a batch, analytic when available.

    Returns:
        tuple[np.ndarray, np.ndarray]: Matrices (N, n, n) and the mask of points where the
            field is defined (analytic) or the stencil fits (finite differences)
    """
    points = as_points(points)
    if prefer_analytic and field.hessian is not None:
        ok = field.defined(points)
        n = points.shape[1] // 2
        matrices = np.full((len(points), n, n), np.nan, dtype=complex)
        if ok.any():
            matrices[ok] = field.hessian(points[ok])
        return matrices, ok
    return finite_difference_levi(field, points, step)


def complex_hessian(
    field: ScalarField, point: np.ndarray, step: float, finite_difference: bool = False
) -> HermitianForm:
    """Levi form of a field at one point.

    Args:
        field (ScalarField): Field to differentiate
        point (np.ndarray): Point in real layout
        step (float): Difference step h
        finite_difference (bool, optional): Force central differences even when an analytic
            Hessian exists, for cross-checking. Defaults to False.

    Returns:
        HermitianForm: The Levi form

    Raises:
        DomainError: If the field (or its stencil) leaves the domain
    """
    matrices, ok = levi_matrices(field, point, step, prefer_analytic=not finite_difference)
    if not ok[0]:
        raise DomainError(f"{field.name} is undefined near {np.ravel(point).tolist()}")
    return HermitianForm(matrices[0])
