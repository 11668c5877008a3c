"""Artifact store protocol."""

from pathlib import Path
from typing import Any, Protocol

from pydantic import BaseModel


class ArtifactStore(Protocol):
    """
    Where run artifacts (reports, voxel files, constructions) are written.

    Pure modules return values; the pipeline service hands them to a store.
    """

    def save_json(
        self, name: str, payload: BaseModel | dict[str, Any], meta: dict[str, Any] | None = None
    ) -> Path:
        """Write a JSON artifact with sorted keys, plus an optional metadata sidecar.

        Args:
            name (str): Artifact file name
            payload (BaseModel | dict[str, Any]): Content
            meta (dict[str, Any] | None, optional): Sidecar content (timestamps, argv)

        Returns:
            Path: Where the artifact was written
        """
        ...

    def save_text(self, name: str, text: str) -> Path:
        """Write a text artifact such as a CSV export.

        Args:
            name (str): Artifact file name
            text (str): Content

        Returns:
            Path: Where the artifact was written
        """
        ...

    def load_json(self, name: str | Path) -> dict[str, Any]:
        """Read a JSON artifact.

        Args:
            name (str | Path): Artifact name, or a path to any JSON file

        Returns:
            dict[str, Any]: Parsed content
        """
        ...

    def exists(self, name: str) -> bool:
        """Check if an artifact exists.

        Args:
            name (str): Artifact file name

        Returns:
            bool: True if it exists, False otherwise
        """
        ...

    def list_artifacts(self) -> list[str]:
        """List artifact names, sidecars included.

        Returns:
            list[str]: Sorted file names
        """
        ...
