"""Run configuration: one command's inputs, tolerances and outputs."""

from enum import StrEnum
from typing import Any

from pydantic import BaseModel, ConfigDict, Field, field_validator

from src.bump.params import BumpParams
from src.config import get_settings


class Command(StrEnum):
    LEVI_SCAN = "levi-scan"
    NUCLEUS = "nucleus"
    CONSTRUCT = "construct"
    VERIFY = "verify"
    SCENE = "scene"


class Tolerances(BaseModel):
    """Numerical tolerances; defaults come from the settings."""

    model_config = ConfigDict(extra="forbid")

    tau: float = Field(default_factory=lambda: get_settings().tau, gt=0)
    fd_step: float = Field(default_factory=lambda: get_settings().fd_step, gt=0)
    activity_gap: float = Field(default_factory=lambda: get_settings().activity_gap, ge=0)
    seam_tol: float = Field(default_factory=lambda: get_settings().seam_tol, ge=0)
    scaling_margin: float = Field(default_factory=lambda: get_settings().scaling_margin, ge=0)


class RunConfig(BaseModel):
    """Everything one run needs.

    Built from settings defaults, then a JSON file, then command-line overrides.
    `family` holds hat family parameters merged over the scene's defaults.
    """

    model_config = ConfigDict(extra="forbid")

    command: Command
    action: str | None = None
    scene: str = "ball"
    resolution: int | None = Field(default=None, ge=2)
    q: int = Field(default=1, ge=1)
    field: str | None = None
    strict: bool = True
    samples_per_voxel: int = Field(default=1, ge=1)
    seed: int = Field(default_factory=lambda: get_settings().seed)
    max_iter: int | None = Field(default=None, ge=0)
    family: dict[str, Any] = Field(default_factory=dict)
    bump: BumpParams = Field(default_factory=BumpParams.from_settings)
    tolerances: Tolerances = Field(default_factory=Tolerances)
    sequence_file: str | None = None
    point: list[float] | None = None
    radius: float = Field(default=0.3, gt=0)
    samples: int | None = Field(default=None, ge=1)
    t_steps: int = Field(default_factory=lambda: get_settings().t_steps, ge=1)
    certify_samples: int = Field(default=1, ge=1)
    output_dir: str = Field(default_factory=lambda: get_settings().output_dir)
    csv: bool = False

    @field_validator("point")
    @classmethod
    def _even_length(cls, point: list[float] | None) -> list[float] | None:
        if point is not None and (not point or len(point) % 2):
            raise ValueError("point needs interleaved real and imaginary parts")
        return point
