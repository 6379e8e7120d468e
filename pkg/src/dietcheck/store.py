"""Document persistence: named collections of JSON documents.

Mirrors a document database at the smallest useful scale: one document per
key, whole-document reads and writes. Two engines are provided — an
in-memory store for tests and CLI runs, and a directory-backed store where
each document is one JSON file (``<root>/<collection>/<quoted key>.json``)
written atomically so readers always observe a complete document.
"""

from __future__ import annotations

import json
import os
import threading
from pathlib import Path
from urllib.parse import quote, unquote


class DocumentStore:
    """Interface: collections of JSON-serializable dict documents."""

    def get(self, collection: str, key: str) -> dict | None:
        raise NotImplementedError

    def put(self, collection: str, key: str, doc: dict) -> None:
        raise NotImplementedError

    def delete(self, collection: str, key: str) -> bool:
        raise NotImplementedError

    def keys(self, collection: str) -> list[str]:
        raise NotImplementedError


class MemoryStore(DocumentStore):
    """Dict-backed store; documents are deep-copied via JSON round-trip."""

    def __init__(self) -> None:
        self._data: dict[str, dict[str, str]] = {}
        self._lock = threading.Lock()

    def get(self, collection: str, key: str) -> dict | None:
        with self._lock:
            raw = self._data.get(collection, {}).get(key)
        return None if raw is None else json.loads(raw)

    def put(self, collection: str, key: str, doc: dict) -> None:
        raw = json.dumps(doc)
        with self._lock:
            self._data.setdefault(collection, {})[key] = raw

    def delete(self, collection: str, key: str) -> bool:
        with self._lock:
            return self._data.get(collection, {}).pop(key, None) is not None

    def keys(self, collection: str) -> list[str]:
        with self._lock:
            return sorted(self._data.get(collection, {}))


class JsonDirStore(DocumentStore):
    """One JSON file per document under ``root/collection/``.

    Keys are percent-encoded into filenames, so arbitrary key strings
    (emails, diet names) are safe. Writes go through a temp file plus
    ``os.replace`` so a concurrent reader never sees a torn document.
    """

    def __init__(self, root: str | Path) -> None:
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self._lock = threading.Lock()

    def _path(self, collection: str, key: str) -> Path:
        return self.root / collection / (quote(key, safe="") + ".json")

    def get(self, collection: str, key: str) -> dict | None:
        path = self._path(collection, key)
        try:
            return json.loads(path.read_text(encoding="utf-8"))
        except FileNotFoundError:
            return None

    def put(self, collection: str, key: str, doc: dict) -> None:
        path = self._path(collection, key)
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_suffix(".json.tmp")
        with self._lock:
            tmp.write_text(json.dumps(doc, ensure_ascii=False, indent=2), encoding="utf-8")
            os.replace(tmp, path)

    def delete(self, collection: str, key: str) -> bool:
        with self._lock:
            try:
                self._path(collection, key).unlink()
                return True
            except FileNotFoundError:
                return False

    def keys(self, collection: str) -> list[str]:
        folder = self.root / collection
        if not folder.is_dir():
            return []
        return sorted(unquote(p.name[: -len(".json")]) for p in folder.glob("*.json"))
