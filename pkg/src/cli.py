"""Command-line front door."""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, NoReturn

from pydantic import ValidationError

from src.config import Settings, get_settings
from src.errors import InputError, QNucleusError
from src.schemas.run import Command, RunConfig
from src.services.pipeline import SCENE_ACTIONS, VERIFY_ACTIONS, ExitCode, PipelineService

logger = logging.getLogger(__name__)


def setup_logging(settings: Settings) -> None:
    """Configure application logging."""
    logging.basicConfig(
        level=settings.log_level,
        format="%(asctime)s [%(levelname)s] %(name)s: %(message)s",
    )


class _Parser(argparse.ArgumentParser):
    """Usage errors are execution errors: exit 1."""

    def error(self, message: str) -> NoReturn:
        self.print_usage(sys.stderr)
        self.exit(ExitCode.ERROR, f"{self.prog}: error: {message}\n")


def _common_flags() -> argparse.ArgumentParser:
    common = _Parser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument("--config", dest="config_file", help="JSON run configuration file")
    common.add_argument(
        "--set",
        dest="overrides",
        action="append",
        metavar="PATH=VALUE",
        help="override a configuration value by dotted path, e.g. tolerances.tau=1e-6",
    )
    common.add_argument("--scene", help="scene name (see `scene list`)")
    common.add_argument("--resolution", type=int, help="voxels per real axis")
    common.add_argument("--q", type=int, help="convexity order")
    common.add_argument("--field", help="catalogue field name")
    common.add_argument("--weak", dest="strict", action="store_false", help="weak q-convexity")
    common.add_argument("--samples-per-voxel", type=int)
    common.add_argument("--seed", type=int)
    common.add_argument("--max-iter", type=int)
    common.add_argument("--sequence-file", help="recorded nucleus.json to replay")
    common.add_argument("--point", type=float, nargs="+", help="real-interleaved point")
    common.add_argument("--radius", type=float)
    common.add_argument("--samples", type=int)
    common.add_argument("--t-steps", type=int)
    common.add_argument("--certify-samples", type=int)
    common.add_argument("--output-dir")
    common.add_argument("--csv", action="store_true", help="also write per-point CSV")
    return common


def build_parser() -> argparse.ArgumentParser:
    """Build the argument parser with one sub-command per pipeline command."""
    common = _common_flags()
    parser = _Parser(prog="qnucleus", description="q-convexity numerical lab")
    commands = parser.add_subparsers(dest="command", required=True)
    commands.add_parser(Command.LEVI_SCAN, parents=[common], help="classify a field")
    commands.add_parser(Command.NUCLEUS, parents=[common], help="approximate a q-nucleus")
    commands.add_parser(Command.CONSTRUCT, parents=[common], help="build a q-convex function")
    verify = commands.add_parser(Command.VERIFY, parents=[common], help="run a probe")
    verify.add_argument("action", choices=VERIFY_ACTIONS)
    scenes = commands.add_parser(Command.SCENE, parents=[common], help="list or run scenes")
    scenes.add_argument("action", choices=SCENE_ACTIONS, nargs="?", default="list")
    return parser


def _parse_value(raw: str) -> Any:
    try:
        return json.loads(raw)
    except json.JSONDecodeError:
        return raw


def _assign(config: dict[str, Any], dotted: str, value: Any) -> None:
    *parents, leaf = dotted.split(".")
    node = config
    for key in parents:
        child = node.setdefault(key, {})
        if not isinstance(child, dict):
            raise InputError(f"{key!r} in {dotted!r} is not a section")
        node = child
    node[leaf] = value


def load_run_config(args: argparse.Namespace) -> RunConfig:
    """Merge defaults, the config file and command-line values, in increasing precedence.

    Raises:
        InputError: If the config file is missing or malformed, or an override is not PATH=VALUE
        ValidationError: If the merged configuration is invalid
    """
    values = vars(args).copy()
    config: dict[str, Any] = {}
    config_file = values.pop("config_file", None)
    if config_file is not None:
        path = Path(config_file)
        try:
            config = json.loads(path.read_text())
        except FileNotFoundError:
            raise InputError(f"config file {path} does not exist") from None
        except json.JSONDecodeError as exc:
            raise InputError(f"config file {path} is not valid JSON: {exc}") from exc
        if not isinstance(config, dict):
            raise InputError(f"config file {path} must hold a JSON object")

    overrides = values.pop("overrides", [])
    config.update(values)
    for item in overrides:
        dotted, sep, raw = item.partition("=")
        if not sep or not dotted:
            raise InputError(f"override {item!r} is not PATH=VALUE")
        _assign(config, dotted, _parse_value(raw))
    return RunConfig.model_validate(config)


def main(argv: list[str] | None = None) -> int:
    """Run one command and return its exit code.

    Args:
        argv (list[str] | None, optional): Arguments without the program name.
            Defaults to sys.argv[1:].

    Returns:
        int: 0 success, 1 execution error, 2 check failures, 3 iteration cap,
            4 construction error
    """
    argv = sys.argv[1:] if argv is None else list(argv)
    settings = get_settings()
    setup_logging(settings)
    args = build_parser().parse_args(argv)
    try:
        config = load_run_config(args)
        outcome = PipelineService(config, argv=argv).run()
    except (QNucleusError, ValidationError, OSError) as exc:
        logger.error("%s failed: %s", args.command, exc)
        print(f"error: {exc}", file=sys.stderr)
        return ExitCode.ERROR
    print(outcome.message)
    for path in outcome.artifacts:
        logger.info("Wrote %s", path)
    return outcome.exit_code
