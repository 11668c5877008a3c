"""Scalar fields on C^n and finite maxima of them."""

from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from typing import Protocol

import numpy as np

from src.core.geometry import AffineMap, as_points
from src.core.voxels import PointPredicate
from src.errors import DomainError, InputError

type Evaluator = Callable[[np.ndarray], np.ndarray]
type HessianEvaluator = Callable[[np.ndarray], np.ndarray]


class Evaluable(Protocol):
    """Anything that can be evaluated on a batch of points."""

    def evaluate(self, points: np.ndarray) -> np.ndarray:
        """Evaluate on a batch.

        Args:
            points (np.ndarray): Batch of shape (N, 2n)

        Returns:
            np.ndarray: Values of shape (N,)
        """
        ...


@dataclass(frozen=True)
class ScalarField(Evaluable):
    """Real function on C^n, vectorized over (N, 2n) batches.

    The optional hessian returns the complex Hessian (d^2 f / dz_j dzbar_k) as an
    (N, n, n) array. The optional domain returns a bool mask of defined points.
    """

    evaluator: Evaluator
    hessian: HessianEvaluator | None = None
    domain: PointPredicate | None = None
    name: str = "field"

    def defined(self, points: np.ndarray) -> np.ndarray:
        points = as_points(points)
        if self.domain is None:
            return np.ones(len(points), dtype=bool)
        return np.asarray(self.domain(points), dtype=bool)

    def evaluate(self, points: np.ndarray) -> np.ndarray:
        """Evaluate on a batch.

        Raises:
            DomainError: If any point lies outside the domain
        """
        points = as_points(points)
        ok = self.defined(points)
        if not ok.all():
            bad = points[np.argmin(ok)]
            raise DomainError(f"{self.name} is undefined at {bad.tolist()}")
        return np.asarray(self.evaluator(points), dtype=float)

    def __call__(self, points: np.ndarray) -> np.ndarray:
        return self.evaluate(points)

    def analytic_hessian(self, points: np.ndarray) -> np.ndarray | None:
        if self.hessian is None:
            return None
        return np.asarray(self.hessian(as_points(points)), dtype=complex)

    def scaled(self, factor: float) -> "ScalarField":
        """Return factor * self."""
        evaluator = self.evaluator
        hessian = self.hessian

        def scaled_hessian(points: np.ndarray) -> np.ndarray:
            return factor * hessian(points)

        return ScalarField(
            evaluator=lambda points: factor * evaluator(points),
            hessian=scaled_hessian if hessian is not None else None,
            domain=self.domain,
            name=f"{factor:g}*{self.name}",
        )

    def pullback(self, chart: AffineMap) -> "ScalarField":
        """Return self composed with a complex-affine map, x -> f(chart(x)).

        The complex Hessian transforms as A^T L conj(A).
        """
        evaluator = self.evaluator
        hessian = self.hessian
        domain = self.domain
        linear = chart.linear

        def pulled_hessian(points: np.ndarray) -> np.ndarray:
            inner = hessian(chart.forward(points))
            return np.einsum("aj,nab,bk->njk", linear, inner, linear.conj())

        return ScalarField(
            evaluator=lambda points: evaluator(chart.forward(points)),
            hessian=pulled_hessian if hessian is not None else None,
            domain=(lambda points: domain(chart.forward(points))) if domain is not None else None,
            name=f"{self.name}∘map",
        )


@dataclass(frozen=True)
class MaxField(Evaluable):
    """Pointwise maximum of finitely many scalar fields over the branches defined there."""

    branches: tuple[ScalarField, ...]
    name: str = field(default="max")

    def __post_init__(self) -> None:
        branches = tuple(self.branches)
        if not branches:
            raise InputError("a max field needs at least one branch")
        object.__setattr__(self, "branches", branches)

    @classmethod
    def of(cls, branches: Sequence[ScalarField], name: str = "max") -> "MaxField":
        return cls(tuple(branches), name)

    def branch_values(self, points: np.ndarray) -> np.ndarray:
        """Values per branch, shape (N, B), with -inf where a branch is undefined."""
        points = as_points(points)
        table = np.full((len(points), len(self.branches)), -np.inf)
        for b, branch in enumerate(self.branches):
            ok = branch.defined(points)
            if ok.any():
                table[ok, b] = branch.evaluator(points[ok])
        return table

    def evaluate(self, points: np.ndarray) -> np.ndarray:
        table = self.branch_values(points)
        values = table.max(axis=1)
        if np.isneginf(values).any():
            bad = as_points(points)[np.argmax(np.isneginf(values))]
            raise DomainError(f"no branch of {self.name} is defined at {bad.tolist()}")
        return values

    def __call__(self, points: np.ndarray) -> np.ndarray:
        return self.evaluate(points)

    def active_branches(self, point: np.ndarray, activity_gap: float) -> list[int]:
        """Indices of branches within activity_gap of the maximum at one point.

        Raises:
            DomainError: If no branch is defined at the point
        """
        row = self.branch_values(point)[0]
        top = row.max()
        if np.isneginf(top):
            raise DomainError(f"no branch of {self.name} is defined at {np.ravel(point).tolist()}")
        return [int(b) for b in np.flatnonzero(np.isfinite(row) & (row >= top - activity_gap))]
