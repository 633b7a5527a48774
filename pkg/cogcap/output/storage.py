"""
Result storage abstraction.

Stores are addressed by URI. Only local ``file://`` URIs and plain paths
are supported.
"""

from __future__ import annotations

import json
from abc import ABC, abstractmethod
from pathlib import Path
from typing import Any, Dict
from urllib.parse import urlparse


class ResultStore(ABC):
    """Abstract base class for experiment result storage."""

    @abstractmethod
    def path_for(self, name: str) -> Path:
        """Local path of an artifact, parent directories created."""
        pass

    @abstractmethod
    def write_text(self, name: str, content: str) -> Path:
        pass

    @abstractmethod
    def write_json(self, name: str, data: Dict[str, Any]) -> Path:
        """Write JSON with sorted keys (byte-stable for equal data)."""
        pass

    @abstractmethod
    def get_uri(self) -> str:
        """Get the full URI of this store."""
        pass

    def write_manifest(self, provenance: Dict[str, Any]) -> Path:
        """Write ``manifest.json`` with the run provenance."""
        return self.write_json("manifest.json", provenance)


class FileResultStore(ResultStore):
    """Local filesystem result store.

    Structure:
        {out}/
        ├── manifest.json   # config echo, seed, trials, tool version
        ├── *.csv / *.json  # result tables
        └── *.svg           # plots
    """

    def __init__(self, base_path: Path):
        self.base_path = Path(base_path)
        self.base_path.mkdir(parents=True, exist_ok=True)

    def path_for(self, name: str) -> Path:
        full_path = self.base_path / name
        full_path.parent.mkdir(parents=True, exist_ok=True)
        return full_path

    def write_text(self, name: str, content: str) -> Path:
        full_path = self.path_for(name)
        full_path.write_text(content, encoding="utf-8")
        return full_path

    def write_json(self, name: str, data: Dict[str, Any]) -> Path:
        return self.write_text(name, json.dumps(data, indent=2, sort_keys=True) + "\n")

    def get_uri(self) -> str:
        return f"file://{self.base_path}"


def create_result_store(uri: str) -> ResultStore:
    """Factory function to create a ResultStore from a URI or path.

    ``file://./results`` and ``file:///abs/results`` are both accepted, as
    is a bare filesystem path.

    Raises:
        ValueError: If the URI scheme is not supported
    """
    parsed = urlparse(uri)

    if parsed.scheme == "file":
        # file://./results parses with netloc "." and path "/results"
        location = parsed.netloc + parsed.path if parsed.netloc else parsed.path
        return FileResultStore(Path(location))
    if parsed.scheme == "" or len(parsed.scheme) == 1:
        # Bare paths (a one-letter scheme is a Windows drive)
        return FileResultStore(Path(uri))
    raise ValueError(
        f"Unsupported storage scheme: {parsed.scheme}. Supported: file://"
    )
