"""Seeded low-discrepancy samplers for spheres, balls and polydiscs in C^k."""

import numpy as np
from scipy.stats import norm, qmc

_EDGE = 1e-12


def unit_cube(dim: int, count: int, seed: int) -> np.ndarray:
    """Scrambled Halton points in the open unit cube, shape (count, dim)."""
    if count <= 0:
        return np.empty((0, dim))
    points = qmc.Halton(d=dim, scramble=True, seed=seed).random(count)
    return np.clip(points, _EDGE, 1.0 - _EDGE)


def sphere(k: int, count: int, seed: int) -> np.ndarray:
    """Points on the unit sphere of C^k, shape (count, k), complex.

    Gaussian directions come from the inverse normal CDF of Halton points.
    """
    gauss = norm.ppf(unit_cube(2 * k, count, seed))
    gauss /= np.linalg.norm(gauss, axis=1, keepdims=True)
    return gauss[:, 0::2] + 1j * gauss[:, 1::2]


def ball(k: int, count: int, seed: int) -> np.ndarray:
    """Points in the open unit ball of C^k, uniform in volume, complex (count, k)."""
    cube = unit_cube(2 * k + 1, count, seed)
    gauss = norm.ppf(cube[:, : 2 * k])
    gauss /= np.linalg.norm(gauss, axis=1, keepdims=True)
    radius = cube[:, 2 * k] ** (1.0 / (2 * k))
    gauss *= radius[:, None]
    return gauss[:, 0::2] + 1j * gauss[:, 1::2]


def polydisc(m: int, count: int, seed: int, radius: float = 1.0) -> np.ndarray:
    """Points in the open polydisc of polyradius `radius`, complex (count, m).

    Each coordinate is sqrt(u) * exp(2 pi i v), uniform in area.
    """
    if m == 0:
        return np.zeros((count, 0), dtype=complex)
    cube = unit_cube(2 * m, count, seed)
    modulus = radius * np.sqrt(cube[:, 0::2])
    angle = 2.0 * np.pi * cube[:, 1::2]
    return modulus * np.exp(1j * angle)


def annulus(m: int, count: int, seed: int, inner: float, outer: float = 1.0) -> np.ndarray:
    """Points whose sup-norm lies in (inner, outer), complex (count, m).

    The first coordinate carries the sup-norm; the rest are drawn in the disc of
    that radius, then coordinates are cycled so every slot gets the lead.
    """
    cube = unit_cube(2 * m, count, seed)
    lead = np.sqrt(inner**2 + (outer**2 - inner**2) * cube[:, 0])
    out = np.empty((count, m), dtype=complex)
    out[:, 0] = lead * np.exp(2j * np.pi * cube[:, 1])
    if m > 1:
        modulus = lead[:, None] * np.sqrt(cube[:, 2::2])
        out[:, 1:] = modulus * np.exp(2j * np.pi * cube[:, 3::2])
    shift = np.arange(count) % m
    rows = np.arange(count)[:, None]
    cols = (np.arange(m)[None, :] - shift[:, None]) % m
    return out[rows, cols]
