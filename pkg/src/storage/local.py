"""Local file system artifact store with atomic writes."""

import json
import logging
import os
import tempfile
from pathlib import Path
from typing import Any

from pydantic import BaseModel

from src.errors import InputError
from src.storage.protocol import ArtifactStore

logger = logging.getLogger(__name__)


def dump_json(payload: BaseModel | dict[str, Any]) -> str:
    """Deterministic JSON text: sorted keys, two-space indentation, trailing newline."""
    if isinstance(payload, BaseModel):
        payload = payload.model_dump(mode="json", by_alias=True)
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def meta_name(name: str) -> str:
    """Sidecar name for an artifact: report.json -> report.meta.json."""
    return f"{Path(name).stem}.meta.json"


class LocalArtifactStore(ArtifactStore):
    """Artifact store backed by one output directory.

    Every write goes to a temporary file in the target directory and is moved into
    place with os.replace, so readers never see a partial file.
    """

    def __init__(self, base_path: str | Path = "./runs") -> None:
        """Initialize the store.

        Args:
            base_path (str | Path, optional): Output directory. Defaults to "./runs".
        """
        self.base_path = Path(base_path)

    def initialize(self) -> None:
        """Create the output directory if it doesn't exist."""
        if not self.base_path.exists():
            self.base_path.mkdir(parents=True, exist_ok=True)
            logger.info("Created output directory: %s", self.base_path)

    def _file_path(self, name: str) -> Path:
        # keep only the final component to stay inside the output directory
        safe_name = Path(name).name
        if safe_name in {"", ".", ".."}:
            raise InputError(f"invalid artifact name {name!r}")
        return self.base_path / safe_name

    def _write(self, path: Path, text: str) -> None:
        self.initialize()
        fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as handle:
                handle.write(text)
            os.replace(tmp, path)
        except BaseException:
            Path(tmp).unlink(missing_ok=True)
            raise

    def save_json(
        self, name: str, payload: BaseModel | dict[str, Any], meta: dict[str, Any] | None = None
    ) -> Path:
        """Write a JSON artifact and, when given, its metadata sidecar."""
        path = self._file_path(name)
        text = dump_json(payload)
        self._write(path, text)
        if meta is not None:
            self._write(self._file_path(meta_name(path.name)), dump_json(meta))
        logger.debug("Saved artifact: %s (%d bytes)", path.name, len(text))
        return path

    def save_text(self, name: str, text: str) -> Path:
        """Write a text artifact."""
        path = self._file_path(name)
        self._write(path, text)
        logger.debug("Saved artifact: %s (%d bytes)", path.name, len(text))
        return path

    def load_json(self, name: str | Path) -> dict[str, Any]:
        """Read a JSON artifact by name, or any JSON file by path.

        Raises:
            InputError: If the file is missing or is not valid JSON
        """
        path = Path(name)
        if not path.exists():
            path = self._file_path(str(name))
        try:
            return json.loads(path.read_text(encoding="utf-8"))
        except FileNotFoundError:
            raise InputError(f"artifact {name} not found") from None
        except json.JSONDecodeError as exc:
            raise InputError(f"artifact {name} is not valid JSON: {exc}") from exc

    def exists(self, name: str) -> bool:
        """Check if an artifact exists."""
        return self._file_path(name).exists()

    def list_artifacts(self) -> list[str]:
        """List artifact names."""
        if not self.base_path.exists():
            return []
        return sorted(f.name for f in self.base_path.iterdir() if f.is_file())
