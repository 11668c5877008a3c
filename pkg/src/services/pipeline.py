"""Pipeline service: runs one command and turns its outcome into artifacts and an exit code."""

import csv
import io
import logging
import sys
from dataclasses import dataclass, field
from datetime import UTC, datetime
from enum import IntEnum
from pathlib import Path
from typing import Any

import numpy as np
from pydantic import ValidationError

from src.config import get_settings
from src.core.geometry import cpoint, to_complex
from src.cuts.nucleus import NucleusResult, approximate_nucleus
from src.cuts.sequence import CutSequence, apply_sequence
from src.errors import ConstructionError, InputError
from src.glue.construct import build_q_convex, certify_constructed
from src.hats.family import HatFamily, generate_family
from src.hats.pairs import HatPair
from src.levi.classify import sample_region, scan_points, summarize
from src.scenes.catalogue import catalogue_field
from src.scenes.scene import (
    ExpectationKind,
    Scene,
    SceneConfig,
    list_scenes,
    run_expectations,
    scene,
    scene_discs,
)
from src.schemas.construction import ConstructedFunctionModel, TreeNodeModel
from src.schemas.hats import VoxelSetFile
from src.schemas.nucleus import NucleusResultModel
from src.schemas.reports import Verdict, VerdictBatch
from src.schemas.run import Command, RunConfig
from src.storage.local import LocalArtifactStore
from src.storage.protocol import ArtifactStore
from src.verify.discs import disc_family_sweep
from src.verify.principles import exhaustion_fill_check, local_max_check
from src.verify.probes import hartogs_probe, hat_fill_probe

logger = logging.getLogger(__name__)

VERIFY_ACTIONS = ("hat-fill", "disc-sweep", "hartogs", "local-max", "exhaustion-fill")
SCENE_ACTIONS = ("list", "run")


class ExitCode(IntEnum):
    OK = 0
    ERROR = 1
    FAILURES = 2
    ITERATION_CAP = 3
    CONSTRUCTION = 4


@dataclass
class RunOutcome:
    """Exit code, written artifacts and a one-line summary."""

    exit_code: ExitCode
    message: str
    artifacts: list[Path] = field(default_factory=list)


class PipelineService:
    """Runs the command named by a RunConfig.

    Pure modules return values; this service writes them through an artifact store,
    with timestamps and argv kept in metadata sidecars.
    """

    def __init__(
        self,
        config: RunConfig,
        store: ArtifactStore | None = None,
        argv: list[str] | None = None,
    ) -> None:
        """Initialize the service.

        Args:
            config (RunConfig): Validated run configuration
            store (ArtifactStore | None, optional): Output store. Defaults to a local
                store on config.output_dir.
            argv (list[str] | None, optional): Command line recorded in sidecars.
                Defaults to sys.argv.
        """
        self.config = config
        self.store = store or LocalArtifactStore(config.output_dir)
        self.argv = list(sys.argv if argv is None else argv)
        self.artifacts: list[Path] = []

    def run(self) -> RunOutcome:
        """Dispatch to the command handler.

        Returns:
            RunOutcome: Exit code per the command contract
        """
        handlers = {
            Command.LEVI_SCAN: self.levi_scan,
            Command.NUCLEUS: self.nucleus,
            Command.CONSTRUCT: self.construct,
            Command.VERIFY: self.verify,
            Command.SCENE: self.scene_command,
        }
        outcome = handlers[self.config.command]()
        outcome.artifacts = list(self.artifacts)
        return outcome

    # -- helpers --------------------------------------------------------------------------

    def _meta(self) -> dict[str, Any]:
        return {
            "created": datetime.now(UTC).isoformat(),
            "argv": self.argv,
            "config": self.config.model_dump(mode="json", by_alias=True),
            "settings": get_settings().model_dump(mode="json"),
        }

    def _save(self, name: str, payload: Any) -> Path:
        path = self.store.save_json(name, payload, meta=self._meta())
        self.artifacts.append(path)
        return path

    def _scene(self) -> Scene:
        built = scene(self.config.scene, self.config.resolution)
        if not 1 <= self.config.q <= built.n - 1:
            raise InputError(f"q={self.config.q} outside [1, {built.n - 1}]")
        return built

    def _family(self, built: Scene) -> HatFamily:
        overrides = {"q": self.config.q, **self.config.family}
        request = SceneConfig(name=built.name, seed=self.config.seed, overrides=overrides)
        return request.family_for(built)

    def _field_name(self, built: Scene) -> str:
        return self.config.field or next(iter(built.fields))

    def _field(self, built: Scene):
        name = self._field_name(built)
        return built.fields.get(name) or catalogue_field(name, built.n)

    # -- commands -------------------------------------------------------------------------

    def levi_scan(self) -> RunOutcome:
        """Classify a field over the scene's scan region; exit 2 when a point fails."""
        config, tol = self.config, self.config.tolerances
        built = self._scene()
        points = sample_region(built.scan_region, config.samples_per_voxel, config.seed)
        if not len(points):
            raise InputError("scan region is empty")
        table = scan_points(
            self._field(built),
            points,
            config.q,
            config.strict,
            tol.tau,
            tol.fd_step,
            tol.activity_gap,
        )
        report = summarize(table, config.q, config.strict, tol.tau, tol.fd_step)
        report.seed = config.seed
        self._save("levi-report.json", report)
        if config.csv:
            self.artifacts.append(self.store.save_text("levi-points.csv", table_csv(table)))
        code = ExitCode.OK if report.all_pass else ExitCode.FAILURES
        return RunOutcome(code, f"{report.passed} of {report.points_scanned} points pass")

    def _run_nucleus(self, built: Scene) -> NucleusResult:
        return approximate_nucleus(
            built.K, self.config.q, self._family(built), built.ambient, self.config.max_iter
        )

    def _save_nucleus(self, result: NucleusResult) -> None:
        self._save("residual.json", VoxelSetFile.from_voxels(result.residual))
        self._save("nucleus.json", NucleusResultModel.from_result(result, "residual.json"))

    def nucleus(self) -> RunOutcome:
        """Approximate the nucleus of the scene's K; exit 3 at the iteration cap."""
        result = self._run_nucleus(self._scene())
        self._save_nucleus(result)
        message = f"residual {result.residual.count} voxels after {result.iterations} sweeps"
        if not result.converged:
            return RunOutcome(ExitCode.ITERATION_CAP, f"iteration cap hit; {message}")
        return RunOutcome(ExitCode.OK, message)

    def _replay(self, built: Scene) -> CutSequence:
        path = Path(self.config.sequence_file)
        if not path.exists():
            raise InputError(f"sequence file {path} does not exist")
        try:
            recorded = NucleusResultModel.model_validate(self.store.load_json(path))
        except ValidationError as exc:
            raise InputError(f"sequence file {path} is malformed: {exc}") from exc
        pairs: list[HatPair] = [entry.hat.to_pair() for entry in recorded.sequence]
        sequence = apply_sequence(built.K, pairs, built.ambient, self.config.q)
        if sequence.skipped:
            raise InputError(f"{len(sequence.skipped)} recorded cuts do not replay on this scene")
        return sequence

    def construct(self) -> RunOutcome:
        """Build and certify a q-convex function; exit 4 when K has a residual."""
        config, tol = self.config, self.config.tolerances
        built = self._scene()
        if config.sequence_file:
            sequence = self._replay(built)
        else:
            result = self._run_nucleus(built)
            self._save_nucleus(result)
            sequence = result.sequence
        if not sequence.residual.is_empty():
            message = (
                f"residual nonempty: {sequence.residual.count} voxels remain, "
                "so no q-convex function with corners is built"
            )
            logger.error(message)
            return RunOutcome(ExitCode.CONSTRUCTION, message)
        try:
            function, log = build_q_convex(
                built.K,
                sequence,
                config.q,
                config.bump,
                built.ambient,
                tol.scaling_margin,
                tol.seam_tol,
            )
        except ConstructionError as exc:
            logger.error("Construction failed at step %s: %s", exc.step, exc)
            return RunOutcome(ExitCode.CONSTRUCTION, f"construction error: {exc}")
        model = ConstructedFunctionModel(
            q=config.q,
            seed=config.seed,
            params=config.bump,
            scales=log.scales,
            retried=log.retried,
            root=TreeNodeModel.from_tree(function),
        )
        self._save("construction.json", model)
        report = certify_constructed(
            function, built.K, config.q, tol.tau, tol.fd_step, config.certify_samples, config.seed
        )
        self._save("certification.json", report)
        code = ExitCode.OK if report.passed else ExitCode.FAILURES
        return RunOutcome(code, f"certification {'passed' if report.passed else 'failed'}")

    def verify(self) -> RunOutcome:
        """Run one verification probe; exit 2 on any violation or non-pass verdict."""
        action = self.config.action
        if action not in VERIFY_ACTIONS:
            raise InputError(f"unknown verify probe {action!r}; known: {', '.join(VERIFY_ACTIONS)}")
        built = self._scene()
        verdicts = getattr(self, f"_verify_{action.replace('-', '_')}")(built)
        batch = VerdictBatch(probe=action, seed=self.config.seed, verdicts=verdicts)
        self._save(f"{action}.json", batch)
        settled = {"consistent", "no_contact", "pass"}
        unsettled = sum(v.verdict not in settled for v in verdicts)
        code = ExitCode.OK if unsettled == 0 else ExitCode.FAILURES
        return RunOutcome(code, f"{len(verdicts)} verdicts, {batch.violations} violations")

    def _omega(self, built: Scene):
        if built.omega is None:
            raise InputError(f"scene {built.name} has no test domain")
        return built.omega

    def _figure(self, built: Scene):
        if built.figure is None or built.embedding is None:
            raise InputError(f"scene {built.name} has no Hartogs figure")
        return built.figure, built.embedding

    def _verify_hat_fill(self, built: Scene) -> list[Verdict]:
        omega = self._omega(built)
        pairs = list(built.probe_pairs) or generate_family(self._family(built), built.ambient)
        q, samples, seed = self.config.q, self.config.samples, self.config.seed
        return [hat_fill_probe(omega, pair, q, samples, samples, seed) for pair in pairs]

    def _verify_disc_sweep(self, built: Scene) -> list[Verdict]:
        point = None
        if self.config.point is not None:
            point = tuple(to_complex(np.array(self.config.point)))
        family = scene_discs(
            built,
            self.config.q,
            point,
            self.config.t_steps,
            self.config.samples or 256,
            self.config.seed,
        )
        return [disc_family_sweep(self._omega(built), family)]

    def _verify_hartogs(self, built: Scene) -> list[Verdict]:
        fig, embed = self._figure(built)
        omega, config = self._omega(built), self.config
        return [hartogs_probe(omega, fig, embed, config.q, config.samples, config.seed)]

    def _verify_local_max(self, built: Scene) -> list[Verdict]:
        if self.config.point is not None:
            centers = [np.array(self.config.point)]
        else:
            centers = [
                cpoint(*c)
                for e in built.expectations
                if e.kind is ExpectationKind.LOCAL_MAX_PASS
                for c in e.centers
            ]
        if not centers:
            raise InputError(f"scene {built.name} names no ball placements; pass a point")
        psi = self._field(built)
        return [
            local_max_check(built.K, psi, center, self.config.radius, self.config.q)
            for center in centers
        ]

    def _verify_exhaustion_fill(self, built: Scene) -> list[Verdict]:
        fig, embed = self._figure(built)
        return [
            exhaustion_fill_check(
                self._omega(built),
                self._field(built),
                fig,
                embed,
                self.config.q,
                built.box,
                self.config.samples,
                self.config.seed,
            )
        ]

    def scene_command(self) -> RunOutcome:
        """List the catalogue, or run one scene's expectations."""
        action = self.config.action or "list"
        if action not in SCENE_ACTIONS:
            raise InputError(f"unknown scene action {action!r}; known: {', '.join(SCENE_ACTIONS)}")
        if action == "list":
            return RunOutcome(ExitCode.OK, "\n".join(list_scenes()))
        built = self._scene()
        request = SceneConfig(
            name=built.name,
            resolution=built.resolution,
            seed=self.config.seed,
            overrides={"q": self.config.q, **self.config.family},
        )
        report = run_expectations(built, request)
        self._save(f"scene-{built.name}.json", report)
        code = ExitCode.OK if report.passed else ExitCode.FAILURES
        passed = sum(o.passed for o in report.outcomes)
        return RunOutcome(code, f"{passed} of {len(report.outcomes)} expectations met")


def table_csv(table) -> str:
    """Per-point scan rows: coordinates, ascending eigenvalues, counts and the pass flag."""
    ndim = table.points.shape[1]
    n = ndim // 2
    coords = [f"{part}{j + 1}" for j in range(n) for part in ("x", "y")]
    header = [*coords, *(f"lambda{j + 1}" for j in range(n)), "n_neg", "n_zero", "n_pos", "pass"]
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for i in range(len(table.points)):
        writer.writerow(
            [
                *(repr(float(v)) for v in table.points[i]),
                *(repr(float(v)) for v in table.eigenvalues[i]),
                *(int(c) for c in table.counts[i]),
                int(bool(table.passed[i])),
            ]
        )
    return buffer.getvalue()
