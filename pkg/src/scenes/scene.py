"""Curated scenes: ambient domains, compact sets and fields with known behaviour."""

import logging
import threading
from collections.abc import Callable
from dataclasses import dataclass, field
from enum import StrEnum
from typing import Any

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from src.config import get_settings
from src.core.ambient import AmbientDomain
from src.core.fields import ScalarField
from src.core.geometry import AffineMap, ChartBox, cpoint
from src.core.parallel import parallel_map
from src.core.voxels import VoxelSet, voxelize
from src.cuts.nucleus import NucleusResult, approximate_nucleus
from src.errors import UnknownSceneError
from src.hats.family import HatFamily, generate_family
from src.hats.figures import HartogsFigure
from src.hats.pairs import HatPair
from src.levi.classify import classify_point, scan_region
from src.scenes import catalogue
from src.schemas.reports import ExpectationOutcome, SceneReport
from src.verify.discs import DiscFamily, disc_family_sweep
from src.verify.domains import DomainSpec
from src.verify.principles import exhaustion_fill_check, local_max_check
from src.verify.probes import hartogs_probe, hat_fill_probe

logger = logging.getLogger(__name__)

DEFAULT_RESOLUTION = 24


class ExpectationKind(StrEnum):
    NUCLEUS_EMPTY = "nucleus_empty"
    NUCLEUS_RETAINS = "nucleus_retains"
    LEVI_PASS = "levi_pass"
    LEVI_FAIL = "levi_fail"
    SIGNATURE = "signature"
    HAT_FILL_VIOLATION = "hat_fill_violation"
    HAT_FILL_CONSISTENT = "hat_fill_consistent"
    HARTOGS_CONSISTENT = "hartogs_consistent"
    LOCAL_MAX_PASS = "local_max_pass"
    LOCAL_MAX_SKIPPED = "local_max_skipped"
    EXHAUSTION_PASS = "exhaustion_pass"
    DISC_NO_CONTACT = "disc_no_contact"
    DISC_FIRST_CONTACT = "disc_first_contact"
    DOCUMENTATION = "documentation_only"


@dataclass(frozen=True)
class Expectation:
    """One machine-checkable claim about a scene."""

    name: str
    kind: ExpectationKind
    field: str | None = None
    q: int = 1
    strict: bool = True
    point: tuple[complex, ...] | None = None
    signature: tuple[int, int, int] | None = None
    centers: tuple[tuple[complex, ...], ...] = ()
    radius: float = 0.3
    note: str = ""


@dataclass(frozen=True)
class Scene:
    """A catalogue entry built at one resolution.

    `region` is where Levi expectations scan (K when absent); `keep` holds the voxels
    a residual must retain; `probe_pairs` replaces the generated family in hat probes;
    `disc_embedding` places the analytic disc family of the disc sweep.
    """

    name: str
    n: int
    resolution: int
    ambient: AmbientDomain
    K: VoxelSet
    fields: dict[str, ScalarField]
    expectations: tuple[Expectation, ...]
    family: HatFamily = field(default_factory=HatFamily)
    omega: DomainSpec | None = None
    region: VoxelSet | None = None
    keep: VoxelSet | None = None
    probe_pairs: tuple[HatPair, ...] = ()
    figure: HartogsFigure | None = None
    embedding: AffineMap | None = None
    disc_embedding: AffineMap | None = None
    description: str = ""

    @property
    def box(self) -> ChartBox:
        return self.ambient.box

    @property
    def scan_region(self) -> VoxelSet:
        return self.K if self.region is None else self.region


class SceneConfig(BaseModel):
    """Scene run request; overrides update the scene's hat family parameters."""

    model_config = ConfigDict(extra="forbid")

    name: str
    resolution: int | None = Field(default=None, ge=2)
    seed: int = 0
    overrides: dict[str, Any] = Field(default_factory=dict)

    def family_for(self, built: Scene) -> HatFamily:
        data = {**built.family.model_dump(), "seed": self.seed, **self.overrides}
        return HatFamily.model_validate(data)


def _norm(points: np.ndarray) -> np.ndarray:
    return np.linalg.norm(points, axis=1)


def _ball(resolution: int) -> Scene:
    box = ChartBox.cube(2, 2.0, resolution)
    K = voxelize(lambda p: _norm(p) <= 1.0, box)
    return Scene(
        name="ball",
        n=2,
        resolution=resolution,
        ambient=AmbientDomain.full(box),
        K=K,
        fields={"norm_sq": catalogue.norm_squared(2)},
        omega=DomainSpec.ball(1.0),
        figure=HartogsFigure(1, 1, 0.5, 0.5),
        embedding=AffineMap.similarity(np.eye(2), 0.6, np.zeros(2)),
        disc_embedding=AffineMap.similarity(np.eye(2), 0.9, np.zeros(2)),
        expectations=(
            Expectation("nucleus is empty", ExpectationKind.NUCLEUS_EMPTY),
            Expectation("norm_sq is 1-convex on K", ExpectationKind.LEVI_PASS, field="norm_sq"),
            Expectation("ball passes hat fills", ExpectationKind.HAT_FILL_CONSISTENT),
            Expectation("ball passes Hartogs figures", ExpectationKind.HARTOGS_CONSISTENT),
            Expectation("discs inside the ball never touch", ExpectationKind.DISC_NO_CONTACT),
        ),
        description="closed unit ball in C^2, full ambient",
    )


def _bidisc(resolution: int) -> Scene:
    box = ChartBox.cube(2, 2.0, resolution)

    def closed_bidisc(points: np.ndarray) -> np.ndarray:
        return np.maximum(_norm(points[:, 0:2]), _norm(points[:, 2:4])) <= 1.0

    return Scene(
        name="bidisc",
        n=2,
        resolution=resolution,
        ambient=AmbientDomain.full(box),
        K=voxelize(closed_bidisc, box),
        fields={"norm_sq": catalogue.norm_squared(2)},
        omega=DomainSpec.polydisc(1.0),
        figure=HartogsFigure(1, 1, 0.5, 0.5),
        embedding=AffineMap.similarity(np.eye(2), 0.9, np.zeros(2)),
        expectations=(
            Expectation("nucleus is empty", ExpectationKind.NUCLEUS_EMPTY),
            Expectation("bidisc passes hat fills", ExpectationKind.HAT_FILL_CONSISTENT),
            Expectation("bidisc passes Hartogs figures", ExpectationKind.HARTOGS_CONSISTENT),
        ),
        description="closed unit bidisc in C^2, full ambient",
    )


def graph_distance(points: np.ndarray) -> np.ndarray:
    """First-order distance estimate to the curve {z_2 = z_1^2}."""
    z1 = points[:, 0] + 1j * points[:, 1]
    z2 = points[:, 2] + 1j * points[:, 3]
    return np.abs(z2 - z1**2) / np.sqrt(1.0 + 4.0 * np.abs(z1) ** 2)


def _analytic_tube(resolution: int) -> Scene:
    box = ChartBox.cube(2, 1.0, resolution)
    ambient = AmbientDomain.from_predicate(box, DomainSpec.ball(0.95).predicate)
    width = 3.0 * box.half_diagonal
    K = voxelize(lambda p: graph_distance(p) <= width, box) & ambient.allowed
    keep = voxelize(lambda p: graph_distance(p) <= box.diagonal, box) & ambient.allowed
    placements = tuple((a, a * a) for a in (-0.4, -0.2, 0.0, 0.2, 0.4))
    return Scene(
        name="analytic-tube",
        n=2,
        resolution=resolution,
        ambient=ambient,
        K=K,
        keep=keep,
        fields={
            "re_z2": catalogue.re_coordinate(2, 1),
            "peaked": catalogue.peaked(2, np.zeros(4)),
        },
        expectations=(
            Expectation("graph voxels survive", ExpectationKind.NUCLEUS_RETAINS),
            Expectation(
                "Re z2 obeys the local maximum principle",
                ExpectationKind.LOCAL_MAX_PASS,
                field="re_z2",
                centers=placements,
            ),
            Expectation(
                "peaked control is skipped",
                ExpectationKind.LOCAL_MAX_SKIPPED,
                field="peaked",
                centers=((0.0, 0.0),),
            ),
        ),
        description="tube around {z2 = z1^2} inside the ball of radius 0.95",
    )


def _cp_chart(resolution: int) -> Scene:
    box = ChartBox((-1.0, -1.0, -1.5, -1.5), (1.0, 1.0, 1.5, 1.5), (resolution,) * 4)

    def annulus(points: np.ndarray) -> np.ndarray:
        modulus = _norm(points[:, 2:4])
        return (modulus >= 0.5) & (modulus <= 1.5)

    K = voxelize(annulus, box)
    return Scene(
        name="cp-chart",
        n=2,
        resolution=resolution,
        ambient=AmbientDomain.full(box),
        K=K,
        fields={"cp_rho": catalogue.cp_chart_rho()},
        expectations=(
            Expectation(
                "rho is 1-convex on the annulus", ExpectationKind.LEVI_PASS, field="cp_rho"
            ),
            Expectation(
                "rho has identity Levi form at (0, 1)",
                ExpectationKind.SIGNATURE,
                field="cp_rho",
                point=(0.0, 1.0),
                signature=(0, 0, 2),
            ),
            Expectation(
                "projective nucleus is the whole space",
                ExpectationKind.DOCUMENTATION,
                note="global statement needs several charts; only the chart exhaustion is checked",
            ),
        ),
        description="affine chart {w2 != 0} of CP^2 with the chart exhaustion rho",
    )


def _hartogs_violator(resolution: int) -> Scene:
    box = ChartBox.cube(2, 2.0, resolution)
    omega = DomainSpec.ball_complement(1.0)
    violator = HatPair(2, 0.5, AffineMap.similarity(np.eye(2), 1.4, np.zeros(2)), label="violator")
    return Scene(
        name="hartogs-violator",
        n=2,
        resolution=resolution,
        ambient=AmbientDomain.full(box),
        K=voxelize(lambda p: _norm(p) <= 1.0, box),
        fields={"norm_sq": catalogue.norm_squared(2)},
        omega=omega,
        probe_pairs=(violator,),
        disc_embedding=AffineMap.similarity(np.eye(2), 2.0, np.zeros(2)),
        expectations=(
            Expectation("hat fill finds a violation", ExpectationKind.HAT_FILL_VIOLATION),
            Expectation(
                "discs with rims outside the ball reach it", ExpectationKind.DISC_FIRST_CONTACT
            ),
        ),
        description="complement of the closed unit ball, which is not pseudoconvex",
    )


def _ball_exhaustion(resolution: int) -> Scene:
    box = ChartBox.cube(2, 1.1, resolution)
    omega = DomainSpec.ball(1.0)
    return Scene(
        name="ball-exhaustion",
        n=2,
        resolution=resolution,
        ambient=omega.as_ambient(box),
        K=voxelize(lambda p: _norm(p) <= 0.6, box),
        fields={"rho_ball": catalogue.ball_exhaustion(2)},
        omega=omega,
        region=omega.voxelize(box),
        figure=HartogsFigure(1, 1, 0.5, 0.5),
        embedding=AffineMap.similarity(np.eye(2), 0.6, np.zeros(2)),
        expectations=(
            Expectation("rho is 1-convex on the ball", ExpectationKind.LEVI_PASS, field="rho_ball"),
            Expectation(
                "exhaustion fills the figure", ExpectationKind.EXHAUSTION_PASS, field="rho_ball"
            ),
        ),
        description="unit ball with the exhaustion |z|^2 / (1 - |z|^2)",
    )


_CATALOGUE: dict[str, Callable[[int], Scene]] = {
    "ball": _ball,
    "bidisc": _bidisc,
    "analytic-tube": _analytic_tube,
    "cp-chart": _cp_chart,
    "hartogs-violator": _hartogs_violator,
    "ball-exhaustion": _ball_exhaustion,
}


def scene_discs(
    built: Scene,
    q: int = 1,
    point: tuple[complex, ...] | None = None,
    t_steps: int | None = None,
    samples: int = 256,
    seed: int = 0,
) -> DiscFamily:
    """Disc family of a scene through `point`, by default (-1/2, 0, ..., 0)."""
    base = point if point is not None else (-0.5,) + (0.0,) * (built.n - 1)
    return DiscFamily(
        p=np.asarray(base, dtype=complex),
        q=q,
        t_steps=t_steps or get_settings().t_steps,
        disc_samples=samples,
        seed=seed,
        embedding=built.disc_embedding,
    )


def list_scenes() -> list[str]:
    return list(_CATALOGUE)


def scene(name: str, resolution: int | None = None) -> Scene:
    """Build a catalogue scene.

    Raises:
        UnknownSceneError: If the name is not in the catalogue
    """
    try:
        builder = _CATALOGUE[name]
    except KeyError:
        raise UnknownSceneError(f"unknown scene {name!r}; known: {', '.join(_CATALOGUE)}") from None
    return builder(resolution or DEFAULT_RESOLUTION)


class _Runner:
    """Executes expectations of one scene, sharing the family and the nucleus run."""

    def __init__(self, built: Scene, family: HatFamily) -> None:
        self.scene = built
        self.family = family
        self._lock = threading.Lock()
        self._pairs: list[HatPair] | None = None
        self._nucleus: NucleusResult | None = None

    def pairs(self) -> list[HatPair]:
        with self._lock:
            if self._pairs is None:
                self._pairs = generate_family(self.family, self.scene.ambient)
            return self._pairs

    def nucleus(self) -> NucleusResult:
        pairs = self.pairs()
        with self._lock:
            if self._nucleus is None:
                self._nucleus = approximate_nucleus(
                    self.scene.K, self.family.q, pairs, self.scene.ambient
                )
            return self._nucleus

    def probe_pairs(self) -> list[HatPair]:
        return list(self.scene.probe_pairs) or self.pairs()

    def run(self, expectation: Expectation) -> ExpectationOutcome:
        passed, detail = self._evaluate(expectation)
        return ExpectationOutcome(
            name=expectation.name, kind=str(expectation.kind), passed=passed, detail=detail
        )

    def _evaluate(self, e: Expectation) -> tuple[bool, str]:
        settings = get_settings()
        built = self.scene
        match e.kind:
            case ExpectationKind.NUCLEUS_EMPTY:
                result = self.nucleus()
                return result.residual.is_empty(), f"residual {result.residual.count} voxels"
            case ExpectationKind.NUCLEUS_RETAINS:
                result = self.nucleus()
                keep = built.K if built.keep is None else built.keep
                lost = (keep - result.residual).count
                return lost == 0 and not result.residual.is_empty(), f"{lost} kept voxels removed"
            case ExpectationKind.LEVI_PASS | ExpectationKind.LEVI_FAIL:
                report = scan_region(
                    built.fields[e.field],
                    built.scan_region,
                    e.q,
                    e.strict,
                    settings.tau,
                    settings.fd_step,
                )
                if e.kind is ExpectationKind.LEVI_PASS:
                    return report.all_pass, f"{report.fail} failing points"
                return report.passed == 0, f"{report.passed} passing points"
            case ExpectationKind.SIGNATURE:
                point = cpoint(*e.point)
                cls = classify_point(built.fields[e.field], point, settings.tau, settings.fd_step)
                found = cls.signature.as_tuple()
                return found == e.signature, f"signature {found}"
            case ExpectationKind.HAT_FILL_VIOLATION | ExpectationKind.HAT_FILL_CONSISTENT:
                return self._hat_fill(e)
            case ExpectationKind.HARTOGS_CONSISTENT:
                verdict = hartogs_probe(built.omega, built.figure, built.embedding, e.q)
                return verdict.verdict == "consistent", verdict.verdict
            case ExpectationKind.LOCAL_MAX_PASS | ExpectationKind.LOCAL_MAX_SKIPPED:
                wanted = "pass" if e.kind is ExpectationKind.LOCAL_MAX_PASS else "skipped"
                verdicts = [
                    local_max_check(built.K, built.fields[e.field], cpoint(*c), e.radius, e.q)
                    for c in e.centers
                ]
                found = [v.verdict for v in verdicts]
                return all(v == wanted for v in found), ", ".join(found)
            case ExpectationKind.EXHAUSTION_PASS:
                verdict = exhaustion_fill_check(
                    built.omega,
                    built.fields[e.field],
                    built.figure,
                    built.embedding,
                    e.q,
                    built.box,
                )
                return verdict.verdict == "pass", verdict.note or verdict.verdict
            case ExpectationKind.DISC_NO_CONTACT | ExpectationKind.DISC_FIRST_CONTACT:
                no_contact = e.kind is ExpectationKind.DISC_NO_CONTACT
                wanted = "no_contact" if no_contact else "first_contact"
                verdict = disc_family_sweep(built.omega, scene_discs(built, e.q, e.point))
                return verdict.verdict == wanted, verdict.verdict
            case ExpectationKind.DOCUMENTATION:
                return True, e.note

    def _hat_fill(self, e: Expectation) -> tuple[bool, str]:
        omega = self.scene.omega
        pairs = self.probe_pairs()
        verdicts = [hat_fill_probe(omega, pair, e.q) for pair in pairs]
        violations = [
            (pair, v) for pair, v in zip(pairs, verdicts, strict=True) if v.verdict == "violation"
        ]
        if e.kind is ExpectationKind.HAT_FILL_CONSISTENT:
            return not violations, f"{len(violations)} violations over {len(pairs)} hats"
        # a violation counts only if its witness re-verifies exactly
        confirmed = [
            pair.label
            for pair, v in violations
            if pair.in_filled(np.array(v.witness))[0] and not omega.contains(np.array(v.witness))[0]
        ]
        return bool(confirmed), f"confirmed violations: {', '.join(confirmed) or 'none'}"


def _outcomes(built: Scene, config: SceneConfig) -> list[ExpectationOutcome]:
    runner = _Runner(built, config.family_for(built))
    return parallel_map(runner.run, built.expectations)


def run_expectations(
    built: Scene, config: SceneConfig | None = None, check_coherence: bool = False
) -> SceneReport:
    """Execute every expectation of a scene through its owning module.

    With check_coherence the scene is rebuilt at 1.5 times the resolution; any
    expectation whose outcome changes is flagged, never failed.
    """
    config = config or SceneConfig(name=built.name)
    outcomes = _outcomes(built, config)
    flags: list[str] = []
    if check_coherence and built.expectations:
        finer = scene(built.name, round(1.5 * built.resolution))
        for coarse, fine in zip(outcomes, _outcomes(finer, config), strict=True):
            if coarse.passed != fine.passed:
                flags.append(f"resolution_sensitive:{coarse.name}")
    report = SceneReport(
        scene=built.name,
        resolution=built.resolution,
        seed=config.seed,
        passed=all(o.passed for o in outcomes),
        outcomes=outcomes,
        flags=flags,
    )
    for outcome in outcomes:
        logger.info("Scene %s: %s -> %s", built.name, outcome.name, outcome.passed)
    return report
