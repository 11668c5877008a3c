"""Report payloads written by scans, validations and certifications."""

from pydantic import BaseModel, ConfigDict, Field


class WorstPoint(BaseModel):
    """The sampled point with the smallest margin."""

    point: list[float]
    eigenvalues: list[float]
    signature: list[int]
    margin: float


class LeviReport(BaseModel):
    """Regional classification summary."""

    model_config = ConfigDict(populate_by_name=True)

    points_scanned: int
    passed: int = Field(alias="pass")
    fail: int
    undefined: int = 0
    q: int
    strict: bool
    tau: float
    h: float
    seed: int | None = None
    worst: WorstPoint | None = None

    @property
    def all_pass(self) -> bool:
        return self.fail == 0 and self.undefined == 0 and self.points_scanned > 0


class CheckResult(BaseModel):
    """One named check inside a validation or certification report."""

    name: str
    passed: bool
    samples: int
    failures: int = 0
    margin: float | None = None
    witness: list[float] | None = None
    note: str | None = None


class ValidationReport(BaseModel):
    """Bump validation or construction certification outcome."""

    kind: str
    q: int
    passed: bool
    checks: list[CheckResult]
    params: dict[str, float | int | str] = Field(default_factory=dict)
    flags: list[str] = Field(default_factory=list)

    def check(self, name: str) -> CheckResult:
        return next(c for c in self.checks if c.name == name)


class Verdict(BaseModel):
    """Outcome of a verification probe."""

    probe: str
    params: dict[str, float | int | str | list[float]] = Field(default_factory=dict)
    verdict: str
    witness: list[float] | None = None
    margins: dict[str, float | None] = Field(default_factory=dict)
    note: str | None = None

    @property
    def is_violation(self) -> bool:
        return self.verdict in {"violation", "fail", "first_contact", "obstruction"}


class ExpectationOutcome(BaseModel):
    name: str
    kind: str
    passed: bool
    detail: str = ""


class SceneReport(BaseModel):
    """Aggregated expectation results for one scene."""

    scene: str
    resolution: int
    seed: int
    passed: bool
    outcomes: list[ExpectationOutcome]
    flags: list[str] = Field(default_factory=list)


class VerdictBatch(BaseModel):
    """Verdicts of one probe run over several inputs."""

    probe: str
    seed: int
    verdicts: list[Verdict]

    @property
    def violations(self) -> int:
        return sum(v.is_violation for v in self.verdicts)
