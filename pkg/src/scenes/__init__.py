"""Scene catalogue with theory-backed expectations."""

from src.scenes.catalogue import FIELDS, catalogue_field
from src.scenes.scene import (
    Expectation,
    ExpectationKind,
    Scene,
    SceneConfig,
    list_scenes,
    run_expectations,
    scene,
    scene_discs,
)

__all__ = [
    "FIELDS",
    "Expectation",
    "ExpectationKind",
    "Scene",
    "SceneConfig",
    "catalogue_field",
    "list_scenes",
    "run_expectations",
    "scene",
    "scene_discs",
]
