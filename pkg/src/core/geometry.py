"""Chart geometry over C^n identified with R^{2n}.

Points are numpy arrays whose last axis holds the real coordinates in the fixed
order (x_1, y_1, ..., x_n, y_n), with z_j = x_j + i y_j. A batch of points is an
array of shape (N, 2n).
"""

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from src.errors import InputError, SingularMapError

SINGULAR_TOL = 1e-9
ROUND_TRIP_TOL = 1e-9

type CPoint = np.ndarray


def cpoint(*coords: complex) -> CPoint:
    """Build a single point from complex coordinates.

    Args:
        *coords (complex): Coordinates z_1, ..., z_n

    Returns:
        CPoint: Real array (x_1, y_1, ..., x_n, y_n)
    """
    return to_real(np.asarray(coords, dtype=complex))


def to_complex(points: np.ndarray) -> np.ndarray:
    """Convert real-interleaved coordinates to complex ones.

    Args:
        points (np.ndarray): Array of shape (..., 2n)

    Returns:
        np.ndarray: Complex array of shape (..., n)
    """
    points = np.asarray(points, dtype=float)
    return points[..., 0::2] + 1j * points[..., 1::2]


def to_real(z: np.ndarray) -> np.ndarray:
    """Convert complex coordinates to the real-interleaved layout."""
    z = np.asarray(z, dtype=complex)
    out = np.empty((*z.shape[:-1], 2 * z.shape[-1]), dtype=float)
    out[..., 0::2] = z.real
    out[..., 1::2] = z.imag
    return out


def as_points(points: np.ndarray, ndim: int | None = None) -> np.ndarray:
    """Normalize input to a finite (N, 2n) float batch.

    Args:
        points (np.ndarray): One point or a batch
        ndim (int | None, optional): Expected real dimension 2n. Defaults to None.

    Returns:
        np.ndarray: Batch of shape (N, 2n)
    """
    batch = np.atleast_2d(np.asarray(points, dtype=float))
    if batch.shape[-1] % 2:
        raise InputError(f"odd real dimension {batch.shape[-1]}")
    if ndim is not None and batch.shape[-1] != ndim:
        raise InputError(f"expected real dimension {ndim}, got {batch.shape[-1]}")
    if not np.all(np.isfinite(batch)):
        raise InputError("points must be finite")
    return batch


@dataclass(frozen=True)
class ChartBox:
    """Axis-aligned box in R^{2n} carrying a regular voxel grid.

    Cell centers are laid out symmetrically around the box midpoint so that a box
    symmetric about the origin has exactly mirrored centers.
    """

    lower: tuple[float, ...]
    upper: tuple[float, ...]
    resolution: tuple[int, ...]

    def __post_init__(self) -> None:
        lower = tuple(float(v) for v in self.lower)
        upper = tuple(float(v) for v in self.upper)
        resolution = tuple(int(v) for v in self.resolution)
        if not (len(lower) == len(upper) == len(resolution)) or len(lower) % 2 or not lower:
            raise InputError("box bounds and resolution must share an even, positive length")
        if any(lo >= hi for lo, hi in zip(lower, upper, strict=True)):
            raise InputError("box lower bounds must be strictly below upper bounds")
        if any(r < 1 for r in resolution):
            raise InputError("box resolution must be positive on every axis")
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)
        object.__setattr__(self, "resolution", resolution)

    @classmethod
    def cube(cls, n: int, half_width: float, cells: int, center: float = 0.0) -> "ChartBox":
        """Create the cube [center - half_width, center + half_width]^{2n}.

        Args:
            n (int): Complex dimension
            half_width (float): Half the side length
            cells (int): Cells per axis

        Returns:
            ChartBox: The cubic box
        """
        return cls(
            lower=(center - half_width,) * (2 * n),
            upper=(center + half_width,) * (2 * n),
            resolution=(cells,) * (2 * n),
        )

    @property
    def dimension(self) -> int:
        """Complex dimension n."""
        return len(self.lower) // 2

    @property
    def ndim(self) -> int:
        return len(self.lower)

    @property
    def shape(self) -> tuple[int, ...]:
        return self.resolution

    @property
    def size(self) -> int:
        return int(np.prod(self.resolution))

    @cached_property
    def widths(self) -> np.ndarray:
        """Cell width per axis."""
        return (np.array(self.upper) - np.array(self.lower)) / np.array(self.resolution)

    @cached_property
    def midpoint(self) -> np.ndarray:
        return (np.array(self.lower) + np.array(self.upper)) / 2.0

    @property
    def diagonal(self) -> float:
        """Length of one voxel diagonal."""
        return float(np.linalg.norm(self.widths))

    @property
    def half_diagonal(self) -> float:
        return self.diagonal / 2.0

    def axis_centers(self, axis: int) -> np.ndarray:
        """Cell-center coordinates along one axis."""
        count = self.resolution[axis]
        offsets = np.arange(count) - (count - 1) / 2.0
        return self.midpoint[axis] + offsets * self.widths[axis]

    def axis_nodes(self, axis: int) -> np.ndarray:
        """Cell-corner coordinates along one axis (resolution + 1 values)."""
        count = self.resolution[axis]
        offsets = np.arange(count + 1) - count / 2.0
        return self.midpoint[axis] + offsets * self.widths[axis]

    def full_window(self) -> tuple[slice, ...]:
        return tuple(slice(0, r) for r in self.resolution)

    def window(self, lo: np.ndarray, hi: np.ndarray) -> tuple[slice, ...] | None:
        """Index window of the cells meeting the axis-aligned region [lo, hi].

        Args:
            lo (np.ndarray): Lower corner of the region
            hi (np.ndarray): Upper corner of the region

        Returns:
            tuple[slice, ...] | None: Slices per axis, or None if no cell is met
        """
        slices = []
        for axis in range(self.ndim):
            start = int(np.floor((lo[axis] - self.lower[axis]) / self.widths[axis]))
            stop = int(np.floor((hi[axis] - self.lower[axis]) / self.widths[axis])) + 1
            start = max(start, 0)
            stop = min(stop, self.resolution[axis])
            if start >= stop:
                return None
            slices.append(slice(start, stop))
        return tuple(slices)

    def centers(self, window: tuple[slice, ...] | None = None) -> np.ndarray:
        """Cell centers of a window as an (N, 2n) batch in C order."""
        window = window or self.full_window()
        axes = [self.axis_centers(a)[s] for a, s in enumerate(window)]
        grids = np.meshgrid(*axes, indexing="ij")
        return np.stack([g.reshape(-1) for g in grids], axis=-1)

    def nodes(self, window: tuple[slice, ...] | None = None) -> np.ndarray:
        """Cell corners of a window, shape (*window_shape + 1, 2n)."""
        window = window or self.full_window()
        axes = [self.axis_nodes(a)[s.start : s.stop + 1] for a, s in enumerate(window)]
        grids = np.meshgrid(*axes, indexing="ij")
        return np.stack(grids, axis=-1)

    def contains(self, points: np.ndarray) -> np.ndarray:
        """Mask of points lying in the closed box."""
        points = as_points(points, self.ndim)
        return np.all((points >= self.lower) & (points <= self.upper), axis=-1)

    def index_of(self, points: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Voxel indices of points.

        Args:
            points (np.ndarray): Batch of points

        Returns:
            tuple[np.ndarray, np.ndarray]: (indices of shape (N, 2n), inside mask)
        """
        points = as_points(points, self.ndim)
        raw = np.floor((points - np.array(self.lower)) / self.widths).astype(int)
        inside = np.all((raw >= 0) & (raw < np.array(self.resolution)), axis=-1)
        return np.clip(raw, 0, np.array(self.resolution) - 1), inside

    def is_symmetric(self) -> bool:
        """True when the box is a cube centered at the origin."""
        return (
            all(lo == -hi for lo, hi in zip(self.lower, self.upper, strict=True))
            and len(set(self.resolution)) == 1
            and len(set(self.upper)) == 1
        )


def random_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Draw a Haar-distributed unitary matrix.

    Args:
        n (int): Matrix size
        rng (np.random.Generator): Seeded generator

    Returns:
        np.ndarray: Complex unitary n x n matrix
    """
    gaussian = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2.0)
    q, r = np.linalg.qr(gaussian)
    phases = np.diag(r) / np.abs(np.diag(r))
    return q * phases


@dataclass(frozen=True, eq=False)
class AffineMap:
    """Complex-affine map z -> A z + b on C^n.

    Construction rejects maps whose smallest singular value is at most 1e-9.
    The inverse linear part is computed once, or taken as given when it is
    known exactly (compositions of exact maps).
    """

    linear: np.ndarray
    offset: np.ndarray
    inverse_linear: np.ndarray | None = field(default=None, repr=False)
    smallest_singular_value: float = field(init=False, repr=False)

    def __post_init__(self) -> None:
        linear = np.array(self.linear, dtype=complex)
        offset = np.array(self.offset, dtype=complex).reshape(-1)
        if linear.ndim != 2 or linear.shape[0] != linear.shape[1]:
            raise SingularMapError("linear part must be square")
        if offset.shape[0] != linear.shape[0]:
            raise SingularMapError("offset length must match the linear part")
        if not (np.all(np.isfinite(linear)) and np.all(np.isfinite(offset))):
            raise SingularMapError("affine map entries must be finite")
        sigma = float(np.linalg.svd(linear, compute_uv=False).min())
        if sigma <= SINGULAR_TOL:
            raise SingularMapError(f"smallest singular value {sigma:.3e} is too small")
        if self.inverse_linear is None:
            inverse = np.linalg.inv(linear)
        else:
            inverse = np.array(self.inverse_linear, dtype=complex)
        for array in (linear, offset, inverse):
            array.setflags(write=False)
        object.__setattr__(self, "linear", linear)
        object.__setattr__(self, "offset", offset)
        object.__setattr__(self, "inverse_linear", inverse)
        object.__setattr__(self, "smallest_singular_value", sigma)

    @classmethod
    def identity(cls, n: int) -> "AffineMap":
        return cls(np.eye(n, dtype=complex), np.zeros(n, dtype=complex), np.eye(n, dtype=complex))

    @classmethod
    def translation(cls, offset: np.ndarray) -> "AffineMap":
        offset = np.asarray(offset, dtype=complex)
        n = offset.shape[0]
        return cls(np.eye(n, dtype=complex), offset, np.eye(n, dtype=complex))

    @classmethod
    def similarity(
        cls, unitary: np.ndarray, scale: float, center: np.ndarray
    ) -> "AffineMap":
        """Build z -> center + scale * U z for a unitary U.

        Args:
            unitary (np.ndarray): Unitary matrix U
            scale (float): Positive scale factor
            center (np.ndarray): Complex image of the model origin

        Returns:
            AffineMap: The similarity map, with exact inverse U^* / scale
        """
        unitary = np.asarray(unitary, dtype=complex)
        if scale <= 0:
            raise SingularMapError("scale must be positive")
        return cls(scale * unitary, center, unitary.conj().T / scale)

    @property
    def dimension(self) -> int:
        return self.linear.shape[0]

    def forward_complex(self, z: np.ndarray) -> np.ndarray:
        return np.asarray(z, dtype=complex) @ self.linear.T + self.offset

    def backward_complex(self, w: np.ndarray) -> np.ndarray:
        return (np.asarray(w, dtype=complex) - self.offset) @ self.inverse_linear.T

    def forward(self, points: np.ndarray) -> np.ndarray:
        """Apply the map to real-layout points."""
        return to_real(self.forward_complex(to_complex(points)))

    def backward(self, points: np.ndarray) -> np.ndarray:
        """Apply the inverse map to real-layout points."""
        return to_real(self.backward_complex(to_complex(points)))

    def inverse(self) -> "AffineMap":
        return AffineMap(
            self.inverse_linear, -(self.inverse_linear @ self.offset), self.linear
        )

    def compose(self, inner: "AffineMap") -> "AffineMap":
        """Return self after inner, z -> A (B z + c) + b."""
        return AffineMap(
            self.linear @ inner.linear,
            self.linear @ inner.offset + self.offset,
            inner.inverse_linear @ self.inverse_linear,
        )

    def is_unitary(self, tol: float = 1e-12) -> bool:
        gram = self.linear.conj().T @ self.linear
        return bool(np.allclose(gram, np.eye(self.dimension), atol=tol))

    def round_trip_error(self, points: np.ndarray) -> float:
        """Max deviation of backward(forward(p)) from p over a batch."""
        points = as_points(points, 2 * self.dimension)
        return float(np.max(np.abs(self.backward(self.forward(points)) - points)))


@dataclass(frozen=True)
class GridSymmetry:
    """Unitary signed permutation of complex coordinates.

    Image coordinate j is i**quarter_turns[j] * z[permutation[j]]. On a cubic box
    centered at the origin it maps the voxel grid onto itself exactly.
    """

    permutation: tuple[int, ...]
    quarter_turns: tuple[int, ...]

    def __post_init__(self) -> None:
        if sorted(self.permutation) != list(range(len(self.permutation))):
            raise InputError("permutation must be a permutation of range(n)")
        if len(self.quarter_turns) != len(self.permutation):
            raise InputError("one quarter-turn count per coordinate is required")
        object.__setattr__(self, "quarter_turns", tuple(t % 4 for t in self.quarter_turns))

    @property
    def dimension(self) -> int:
        return len(self.permutation)

    def affine_map(self) -> AffineMap:
        n = self.dimension
        linear = np.zeros((n, n), dtype=complex)
        for j, (source, turns) in enumerate(zip(self.permutation, self.quarter_turns, strict=True)):
            linear[j, source] = 1j**turns
        return AffineMap(linear, np.zeros(n, dtype=complex), linear.conj().T)

    def _axis_plan(self) -> tuple[list[int], list[bool]]:
        """Source real axis and sign flip for every target real axis."""
        sources: list[int] = []
        flips: list[bool] = []
        for source, turns in zip(self.permutation, self.quarter_turns, strict=True):
            x, y = 2 * source, 2 * source + 1
            # i^t (x + iy): t=0 (x, y), t=1 (-y, x), t=2 (-x, -y), t=3 (y, -x)
            plan = {0: ((x, False), (y, False)), 1: ((y, True), (x, False)),
                    2: ((x, True), (y, True)), 3: ((y, False), (x, True))}[turns]
            for axis, flip in plan:
                sources.append(axis)
                flips.append(flip)
        return sources, flips

    def apply_to_array(self, array: np.ndarray) -> np.ndarray:
        """Move a grid-shaped array along with the points it describes."""
        sources, flips = self._axis_plan()
        moved = np.transpose(array, sources)
        flip_axes = tuple(axis for axis, flip in enumerate(flips) if flip)
        return np.flip(moved, axis=flip_axes) if flip_axes else moved.copy()

    def apply_points(self, points: np.ndarray) -> np.ndarray:
        return self.affine_map().forward(points)
