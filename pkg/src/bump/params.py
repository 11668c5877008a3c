"""Parameters of the bump surrogate."""

from pydantic import BaseModel, ConfigDict, Field

from src.config import Settings, get_settings

ESCALATION_STEPS = ("offset", "growth", "validation_radius")


class BumpParams(BaseModel):
    """Growth slope of the cutoff, offset of the quadratic factor, certified radius.

    JSON uses the short keys K_g, M_b and R_v.
    """

    model_config = ConfigDict(populate_by_name=True, frozen=True)

    growth: float = Field(default=4.0, gt=0, alias="K_g")
    offset: float = Field(default=4.0, gt=0, alias="M_b")
    validation_radius: float = Field(default=2.0, gt=0, alias="R_v")

    @classmethod
    def from_settings(cls, settings: Settings | None = None) -> "BumpParams":
        settings = settings or get_settings()
        return cls(
            growth=settings.growth,
            offset=settings.offset,
            validation_radius=settings.validation_radius,
        )

    def escalated(self, attempt: int) -> "BumpParams":
        """Parameters after a failed certification, cycling through the escalation steps."""
        match ESCALATION_STEPS[attempt % len(ESCALATION_STEPS)]:
            case "offset":
                return self.model_copy(update={"offset": 2.0 * self.offset})
            case "growth":
                return self.model_copy(update={"growth": 2.0 * self.growth})
            case _:
                return self.model_copy(update={"validation_radius": self.validation_radius / 2.0})
