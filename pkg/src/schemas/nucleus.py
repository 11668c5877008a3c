"""Nucleus run file."""

from pydantic import BaseModel, Field

from src.cuts.nucleus import NucleusResult
from src.schemas.hats import HatPairModel


class CutEntry(BaseModel):
    hat: HatPairModel
    removed_count: int


class NucleusResultModel(BaseModel):
    """Residual reference plus the replayable sequence of productive cuts."""

    residual: str
    q: int
    iterations: int
    converged: bool
    family_seed: int | None = None
    family_size: int = 0
    removed_total: int
    residual_count: int
    sequence: list[CutEntry] = Field(default_factory=list)

    @classmethod
    def from_result(cls, result: NucleusResult, residual_ref: str) -> "NucleusResultModel":
        return cls(
            residual=residual_ref,
            q=result.sequence.q,
            iterations=result.iterations,
            converged=result.converged,
            family_seed=result.family_seed,
            family_size=result.family_size,
            removed_total=result.sequence.removed_total,
            residual_count=result.residual.count,
            sequence=[
                CutEntry(
                    hat=HatPairModel.from_pair(record.pair), removed_count=record.removed_count
                )
                for record in result.sequence.records
            ],
        )
