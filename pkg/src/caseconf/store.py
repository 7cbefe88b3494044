"""Versioned in-memory store of immutable case snapshots.

Every mutation (defeater resolution, document upload) appends a new
snapshot; prior versions stay retrievable. Reads never block: they hand out
immutable graphs. Mutations to one case are serialized by a per-case lock.
"""

from __future__ import annotations

import threading
from pathlib import Path
from typing import Callable, Optional

from .document import load_case
from .errors import CaseConfError, UnknownNodeError
from .model import ArgumentGraph


class CaseStore:
    def __init__(self):
        self._versions: dict[str, list[ArgumentGraph]] = {}
        self._locks: dict[str, threading.Lock] = {}
        self._registry_lock = threading.Lock()

    def _lock_for(self, case_id: str) -> threading.Lock:
        with self._registry_lock:
            return self._locks.setdefault(case_id, threading.Lock())

    def load_directory(self, directory: str | Path) -> list[str]:
        """Load every ``*.json`` case document found in a directory."""
        loaded = []
        for path in sorted(Path(directory).glob("*.json")):
            graph = load_case(path)
            self.put(graph.case_id, graph)
            loaded.append(graph.case_id)
        return loaded

    def list_cases(self) -> list[dict]:
        with self._registry_lock:
            items = list(self._versions.items())
        return [
            {"id": case_id, "title": versions[-1].title, "version": len(versions)}
            for case_id, versions in sorted(items)
        ]

    def put(self, case_id: str, graph: ArgumentGraph) -> int:
        """Store a new snapshot; returns the new version number (1-based)."""
        if graph.case_id != case_id:
            raise CaseConfError(
                f"document case id {graph.case_id!r} does not match {case_id!r}"
            )
        with self._lock_for(case_id):
            versions = self._versions.setdefault(case_id, [])
            versions.append(graph)
            return len(versions)

    def get(self, case_id: str, version: Optional[int] = None) -> tuple[ArgumentGraph, int]:
        versions = self._versions.get(case_id)
        if not versions:
            raise UnknownNodeError(f"unknown case {case_id!r}")
        if version is None:
            version = len(versions)
        if not 1 <= version <= len(versions):
            raise UnknownNodeError(f"case {case_id!r} has no version {version}")
        return versions[version - 1], version

    def mutate(
        self, case_id: str, fn: Callable[[ArgumentGraph], ArgumentGraph]
    ) -> tuple[ArgumentGraph, int]:
        """Apply a graph-to-graph function under the case's writer lock."""
        lock = self._lock_for(case_id)
        with lock:
            versions = self._versions.get(case_id)
            if not versions:
                raise UnknownNodeError(f"unknown case {case_id!r}")
            updated = fn(versions[-1])
            versions.append(updated)
            return updated, len(versions)
