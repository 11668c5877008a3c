"""Exception hierarchy shared by every module."""


class QNucleusError(Exception):
    """Base class for all lab errors."""


class BoxMismatchError(QNucleusError):
    """Two voxel sets live on different chart boxes."""


class SingularMapError(QNucleusError, ValueError):
    """An affine map is not invertible within tolerance."""


class DomainError(QNucleusError):
    """A field was evaluated outside its domain."""


class InvalidCutError(QNucleusError):
    """A spherical cut was applied whose hat surface meets the set or leaves the ambient."""


class OrderError(QNucleusError):
    """A hat pair has the wrong order for the requested q."""


class InputError(QNucleusError, ValueError):
    """Inputs violate an operation's precondition."""


class CannotDominateError(QNucleusError):
    """The bump is not positive on a seam voxel, so no scaling constant exists."""


class SeamViolationError(QNucleusError):
    """The scaled bump is not dominated on the opposite seam."""


class GlueError(QNucleusError):
    """A strict seam inequality fails; carries the offending voxel."""

    def __init__(self, message: str, witness: tuple[int, ...] | None = None) -> None:
        super().__init__(message)
        self.witness = witness


class CoverageError(QNucleusError):
    """The compact set is not covered by the two open pieces."""


class ConstructionError(QNucleusError):
    """An induction step of the q-convex construction failed."""

    def __init__(self, message: str, step: int, witness: tuple[int, ...] | None = None) -> None:
        super().__init__(f"step {step}: {message}")
        self.step = step
        self.witness = witness


class BumpCertificationError(QNucleusError):
    """The bump surrogate could not be certified after all escalations."""


class UnknownSceneError(QNucleusError, KeyError):
    """The requested scene is not in the catalogue."""
