"""Catalogue fields with closed-form complex Hessians."""

from collections.abc import Callable

import numpy as np

from src.bump.field import hat_bump
from src.bump.params import BumpParams
from src.core.fields import ScalarField
from src.core.geometry import AffineMap, as_points, to_complex
from src.errors import InputError
from src.hats.pairs import HatPair


def _identity_stack(count: int, n: int) -> np.ndarray:
    return np.broadcast_to(np.eye(n, dtype=complex), (count, n, n)).copy()


def norm_squared(n: int) -> ScalarField:
    """|z|^2, strictly plurisubharmonic."""
    return ScalarField(
        evaluator=lambda p: np.sum(as_points(p) ** 2, axis=1),
        hessian=lambda p: _identity_stack(len(as_points(p)), n),
        name="norm_sq",
    )


def re_z1_squared(n: int) -> ScalarField:
    """Re(z_1^2), pluriharmonic."""
    return ScalarField(
        evaluator=lambda p: (to_complex(as_points(p))[:, 0] ** 2).real,
        hessian=lambda p: np.zeros((len(as_points(p)), n, n), dtype=complex),
        name="re_z1_sq",
    )


def re_coordinate(n: int, j: int) -> ScalarField:
    """Re z_j (zero-based j), pluriharmonic."""
    if not 0 <= j < n:
        raise InputError(f"coordinate {j} outside C^{n}")
    return ScalarField(
        evaluator=lambda p: as_points(p)[:, 2 * j],
        hessian=lambda p: np.zeros((len(as_points(p)), n, n), dtype=complex),
        name=f"re_z{j + 1}",
    )


def indefinite(n: int) -> ScalarField:
    """|z_1|^2 - 2|z_2|^2 with Levi form diag(1, -2, 0, ...)."""
    if n < 2:
        raise InputError("the indefinite field needs n >= 2")
    levi = np.zeros((n, n), dtype=complex)
    levi[0, 0], levi[1, 1] = 1.0, -2.0

    def evaluate(points: np.ndarray) -> np.ndarray:
        z = to_complex(as_points(points))
        return np.abs(z[:, 0]) ** 2 - 2.0 * np.abs(z[:, 1]) ** 2

    return ScalarField(
        evaluator=evaluate,
        hessian=lambda p: np.broadcast_to(levi, (len(as_points(p)), n, n)).copy(),
        name="indefinite",
    )


def peaked(n: int, center: np.ndarray) -> ScalarField:
    """1 - |z - center|^2, with Levi form -I; center in real layout."""
    center = np.asarray(center, dtype=float)
    return ScalarField(
        evaluator=lambda p: 1.0 - np.sum((as_points(p) - center) ** 2, axis=1),
        hessian=lambda p: -_identity_stack(len(as_points(p)), n),
        name="peaked",
    )


def cp_chart_rho() -> ScalarField:
    """(1 + |w_1|^2) / |w_2|^2 on the chart {w_2 != 0} of C^2."""

    def evaluate(points: np.ndarray) -> np.ndarray:
        w = to_complex(as_points(points, 4))
        return (1.0 + np.abs(w[:, 0]) ** 2) / np.abs(w[:, 1]) ** 2

    def hessian(points: np.ndarray) -> np.ndarray:
        w = to_complex(as_points(points, 4))
        a, b = np.abs(w[:, 0]) ** 2, np.abs(w[:, 1]) ** 2
        out = np.empty((len(w), 2, 2), dtype=complex)
        out[:, 0, 0] = 1.0 / b
        out[:, 0, 1] = -w[:, 0].conj() * w[:, 1] / b**2
        out[:, 1, 0] = -w[:, 0] * w[:, 1].conj() / b**2
        out[:, 1, 1] = (1.0 + a) / b**2
        return out

    return ScalarField(
        evaluator=evaluate,
        hessian=hessian,
        domain=lambda p: np.abs(to_complex(as_points(p, 4))[:, 1]) > 0.0,
        name="cp_rho",
    )


def ball_exhaustion(n: int) -> ScalarField:
    """|z|^2 / (1 - |z|^2) on the unit ball."""

    def evaluate(points: np.ndarray) -> np.ndarray:
        s = np.sum(as_points(points) ** 2, axis=1)
        return s / (1.0 - s)

    def hessian(points: np.ndarray) -> np.ndarray:
        z = to_complex(as_points(points))
        s = np.sum(np.abs(z) ** 2, axis=1)
        first = 1.0 / (1.0 - s) ** 2
        second = 2.0 / (1.0 - s) ** 3
        outer = np.einsum("nj,nk->njk", z.conj(), z)
        return first[:, None, None] * np.eye(n) + second[:, None, None] * outer

    return ScalarField(
        evaluator=evaluate,
        hessian=hessian,
        domain=lambda p: np.sum(as_points(p) ** 2, axis=1) < 1.0,
        name="rho_ball",
    )


def identity_bump(
    n: int, q: int = 1, r: float = 0.5, params: BumpParams | None = None
) -> ScalarField:
    """psi_r on the identity hat pair of order n - q + 1."""
    pair = HatPair(n - q + 1, r, AffineMap.identity(n), label="identity")
    return hat_bump(pair, q, params)


FIELDS: dict[str, Callable[[int], ScalarField]] = {
    "norm_sq": norm_squared,
    "re_z1_sq": re_z1_squared,
    "re_z2": lambda n: re_coordinate(n, 1),
    "indefinite": indefinite,
    "cp_rho": lambda n: cp_chart_rho(),
    "rho_ball": ball_exhaustion,
    "psi_r": identity_bump,
}


def catalogue_field(name: str, n: int) -> ScalarField:
    """Build a catalogue field by name.

    Raises:
        InputError: If the name is unknown or the field does not exist in C^n
    """
    try:
        factory = FIELDS[name]
    except KeyError:
        raise InputError(f"unknown field {name!r}; known: {', '.join(sorted(FIELDS))}") from None
    if name == "cp_rho" and n != 2:
        raise InputError("cp_rho lives on a chart of CP^2, so n must be 2")
    return factory(n)
