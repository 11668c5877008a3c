"""Hermitian forms, eigenvalue signatures and convexity classes."""

from dataclasses import dataclass, field

import numpy as np

from src.errors import InputError

HERMITIAN_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class HermitianForm:
    """Levi form at a point: an n x n Hermitian matrix (symmetrized on construction)."""

    matrix: np.ndarray

    def __post_init__(self) -> None:
        matrix = np.array(self.matrix, dtype=complex)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise InputError("a Hermitian form needs a square matrix")
        matrix = (matrix + matrix.conj().T) / 2.0
        matrix.setflags(write=False)
        object.__setattr__(self, "matrix", matrix)

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]

    def eigenvalues(self) -> np.ndarray:
        """Ascending eigenvalues from the deterministic LAPACK Hermitian solver."""
        return np.linalg.eigvalsh(self.matrix)

    def deviation(self, other: "HermitianForm") -> float:
        return float(np.max(np.abs(self.matrix - other.matrix)))


@dataclass(frozen=True)
class Signature:
    """Counts of negative, zero and positive eigenvalues under an absolute tolerance."""

    n_neg: int
    n_zero: int
    n_pos: int
    tau: float

    @property
    def n(self) -> int:
        return self.n_neg + self.n_zero + self.n_pos

    @property
    def n_nonpositive(self) -> int:
        return self.n_neg + self.n_zero

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.n_neg, self.n_zero, self.n_pos)


@dataclass(frozen=True)
class ConvexityClass:
    """Smallest q for which a point classifies q-convex (strict) and weakly q-convex.

    A value of n + 1 means the point fails even for q = n.
    """

    q_min_strict: int
    q_min_weak: int
    signature: Signature | None = field(default=None, compare=False)
    eigenvalues: tuple[float, ...] = field(default=(), compare=False)

    @classmethod
    def from_signature(
        cls, signature: Signature, eigenvalues: np.ndarray | None = None
    ) -> "ConvexityClass":
        values = () if eigenvalues is None else tuple(float(v) for v in eigenvalues)
        return cls(signature.n_nonpositive + 1, signature.n_neg + 1, signature, values)

    def is_q_convex(self, q: int, strict: bool = True) -> bool:
        return (self.q_min_strict if strict else self.q_min_weak) <= q

    def worst(self, other: "ConvexityClass") -> "ConvexityClass":
        """Componentwise maximum.

        Keeps the signature of the side with the larger strict bound, ties going to
        the larger weak bound.
        """
        ours = (self.q_min_strict, self.q_min_weak)
        theirs = (other.q_min_strict, other.q_min_weak)
        lead = self if ours >= theirs else other
        return ConvexityClass(
            max(self.q_min_strict, other.q_min_strict),
            max(self.q_min_weak, other.q_min_weak),
            lead.signature,
            lead.eigenvalues,
        )


def signature(form: HermitianForm, tau: float) -> Signature:
    """Count eigenvalues below -tau, within [-tau, tau], and above tau."""
    if tau <= 0:
        raise InputError("tau must be positive")
    values = form.eigenvalues()
    return _count(values, tau)


def _count(values: np.ndarray, tau: float) -> Signature:
    zero = np.abs(values) <= tau
    return Signature(
        n_neg=int(np.count_nonzero((values < 0) & ~zero)),
        n_zero=int(np.count_nonzero(zero)),
        n_pos=int(np.count_nonzero((values > 0) & ~zero)),
        tau=tau,
    )


def batch_signatures(matrices: np.ndarray, tau: float) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues and (n_neg, n_zero, n_pos) counts for a stack of Hermitian matrices.

    Args:
        matrices (np.ndarray): Complex array (N, n, n)
        tau (float): Zero tolerance

    Returns:
        tuple[np.ndarray, np.ndarray]: Eigenvalues (N, n) ascending and counts (N, 3)
    """
    if tau <= 0:
        raise InputError("tau must be positive")
    sym = (matrices + np.conj(np.swapaxes(matrices, -1, -2))) / 2.0
    values = np.linalg.eigvalsh(sym)
    zero = np.abs(values) <= tau
    counts = np.stack(
        [
            np.count_nonzero((values < 0) & ~zero, axis=-1),
            np.count_nonzero(zero, axis=-1),
            np.count_nonzero((values > 0) & ~zero, axis=-1),
        ],
        axis=-1,
    )
    return values, counts
