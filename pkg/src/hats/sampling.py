"""Deterministic low-discrepancy samples of hat surfaces and filled hats."""

import numpy as np

from src.core import sampling
from src.hats.pairs import HatPair

_MAX_ROUNDS = 12


def _cap_rejection(draw, k: int, r: float, count: int, seed: int) -> np.ndarray:
    """Keep draws with Re z_1 >= r, enlarging the batch until count are accepted."""
    if count <= 0:
        return np.zeros((0, k), dtype=complex)
    batch = max(4 * count, 64)
    for _ in range(_MAX_ROUNDS):
        candidates = draw(k, batch, seed)
        kept = candidates[candidates[:, 0].real >= r]
        if len(kept) >= count:
            return kept[:count]
        batch *= 4
    raise RuntimeError(f"cap with r={r} too thin to sample {count} points")


def cap_surface_model(k: int, r: float, count: int, seed: int) -> np.ndarray:
    """Model points of the cap sphere; the first one is always the apex."""
    apex = np.zeros((1, k), dtype=complex)
    apex[0, 0] = 1.0
    rest = _cap_rejection(sampling.sphere, k, r, count - 1, seed)
    return np.concatenate([apex, rest])[:count]


def cap_solid_model(k: int, r: float, count: int, seed: int) -> np.ndarray:
    """Model points of the filled cap {|z| < 1, Re z_1 >= r}."""
    return _cap_rejection(sampling.ball, k, r, count, seed)


def rim_model(k: int, r: float, count: int, seed: int) -> np.ndarray:
    """Model points of the rim {|z| = 1, Re z_1 = r}."""
    points = np.zeros((count, k), dtype=complex)
    points[:, 0] = r
    if k == 1:
        points[:, 0] += 1j * np.sqrt(1.0 - r**2) * np.where(np.arange(count) % 2, 1.0, -1.0)
        return points
    direction = sampling.sphere(k, count, seed)
    direction[:, 0] = 1j * direction[:, 0].imag
    norm = np.linalg.norm(direction, axis=1, keepdims=True)
    return points + np.sqrt(1.0 - r**2) * direction / np.where(norm > 0, norm, 1.0)


def _tails(pair: HatPair, count: int, seed: int) -> np.ndarray:
    return sampling.polydisc(pair.n - pair.k, count, seed)


def sample_S(pair: HatPair, count: int, seed: int = 0) -> np.ndarray:
    """Samples of S = Phi(cap sphere x polydisc), real layout (count, 2n).

    The first sample is the image of the apex (1', 0).
    """
    head = cap_surface_model(pair.k, pair.r, count, seed)
    tail = _tails(pair, count, seed + 1)
    if pair.n > pair.k:
        tail[0] = 0.0
    return pair.to_ambient(np.concatenate([head, tail], axis=1))


def sample_filled(pair: HatPair, count: int, seed: int = 0) -> np.ndarray:
    """Samples of the filled hat Phi(S_hat x polydisc), real layout (count, 2n)."""
    head = cap_solid_model(pair.k, pair.r, count, seed)
    tail = _tails(pair, count, seed + 1)
    return pair.to_ambient(np.concatenate([head, tail], axis=1))


def sample_enlarged(pair: HatPair, count: int, seed: int = 0) -> np.ndarray:
    """Samples of the (1 + mu)-scaled closed model region, including its boundary pieces.

    Mixes the solid cap, the cap sphere and the rim, each crossed with polydisc
    points and with points of the polydisc's distinguished boundary.
    """
    third = max(count // 3, 1)
    heads = np.concatenate(
        [
            cap_solid_model(pair.k, pair.r, third, seed),
            cap_surface_model(pair.k, pair.r, third, seed + 1),
            rim_model(pair.k, pair.r, third, seed + 2),
        ]
    )
    m = pair.n - pair.k
    tails = sampling.polydisc(m, len(heads), seed + 3)
    if m:
        torus = np.exp(2j * np.pi * sampling.unit_cube(m, len(heads), seed + 4))
        tails[1::2] = torus[1::2]
    model = (1.0 + pair.mu) * np.concatenate([heads, tails], axis=1)
    return pair.to_ambient(model)
