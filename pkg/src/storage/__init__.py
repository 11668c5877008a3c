"""Artifact storage layer."""

from src.storage.local import LocalArtifactStore
from src.storage.protocol import ArtifactStore

__all__ = ["ArtifactStore", "LocalArtifactStore"]
