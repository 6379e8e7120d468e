"""Diet catalog: named rule sets with descriptions and forbidden-ingredient lists.

One diet is one document keyed by its unique name, and a read always returns
the whole document (description plus the complete forbidden list) in a single
call; partial projection is deliberately not offered. Mutations are
serialized behind a lock and bump a monotonically increasing catalog version.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .errors import DietNotFound, SeedParseError, SeedValidationError, Unauthorized, ValidationError
from .store import DocumentStore, MemoryStore
from .transcript import normalize_term

# Reserved pseudo-diet name that carries a user's own unwanted ingredients.
CUSTOM_DIET = "Custom"

ROLE_MEMBER = "member"
ROLE_ADMIN = "admin"

_COLLECTION = "diets"
_META_COLLECTION = "meta"
_META_KEY = "catalog"


@dataclass
class Diet:
    """A named diet: description plus ordered forbidden-ingredient list."""

    name: str
    description: str = ""
    forbidden_ingredients: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "description": self.description,
            "forbidden_ingredients": list(self.forbidden_ingredients),
        }


def _validate_diet(name: str, description: str, ingredients: list[str],
                   error: type[ValidationError] = ValidationError) -> Diet:
    """Normalize and validate one diet entry; raises ``error`` on violations."""
    name = name.strip()
    if not name:
        raise error("diet name must be non-empty")
    if name == CUSTOM_DIET:
        raise error(f"diet name {CUSTOM_DIET!r} is reserved for user-defined ingredients")
    normalized: list[str] = []
    for entry in ingredients:
        term = normalize_term(entry)
        if not term:
            raise error(f"diet {name!r} contains an empty forbidden ingredient")
        if "," in term:
            raise error(
                f"diet {name!r}: forbidden ingredient {term!r} contains a comma "
                "and could never match a single label token"
            )
        if term not in normalized:
            normalized.append(term)
    return Diet(name=name, description=description, forbidden_ingredients=normalized)


def default_seed_path() -> Path:
    """Path of the diet seed file shipped with the package."""
    return Path(resources.files("dietcheck").joinpath("data/seed_diets.json"))  # type: ignore[arg-type]


class Catalog:
    """The set of known diets, optionally persisted document-per-diet."""

    def __init__(self, store: DocumentStore | None = None) -> None:
        self._store = store or MemoryStore()
        self._lock = threading.RLock()
        self._diets: dict[str, Diet] = {}
        self._version = 0
        self._load_existing()

    def _load_existing(self) -> None:
        meta = self._store.get(_META_COLLECTION, _META_KEY)
        if meta:
            self._version = int(meta.get("version", 0))
        for name in self._store.keys(_COLLECTION):
            doc = self._store.get(_COLLECTION, name)
            if doc is not None:
                self._diets[name] = Diet(
                    name=doc["name"],
                    description=doc.get("description", ""),
                    forbidden_ingredients=list(doc.get("forbidden_ingredients", [])),
                )

    # --- read side -----------------------------------------------------

    @property
    def version(self) -> int:
        return self._version

    def __len__(self) -> int:
        return len(self._diets)

    def __contains__(self, name: str) -> bool:
        return name in self._diets

    def names(self) -> list[str]:
        return sorted(self._diets)

    def get_diet(self, name: str) -> Diet:
        """Return the full diet document — description and complete list."""
        with self._lock:
            diet = self._diets.get(name)
            if diet is None:
                raise DietNotFound(f"no diet named {name!r}")
            return Diet(diet.name, diet.description, list(diet.forbidden_ingredients))

    def list_diets(self) -> list[tuple[str, str]]:
        """All (name, description) pairs, sorted by name."""
        with self._lock:
            return [(d.name, d.description) for d in
                    sorted(self._diets.values(), key=lambda d: d.name)]

    # --- write side ------------------------------------------------------

    def _bump(self) -> int:
        self._version += 1
        self._store.put(_META_COLLECTION, _META_KEY, {"version": self._version})
        return self._version

    def load_seed(self, path: str | Path) -> int:
        """Replace the catalog with exactly the diets in the seed file.

        Returns the new catalog version. Lowercasing/trimming is applied to
        every ingredient on load; duplicate ingredients within one diet are
        collapsed, keeping first occurrence.
        """
        path = Path(path)
        try:
            payload = json.loads(path.read_text(encoding="utf-8"))
        except FileNotFoundError as exc:
            raise SeedParseError(f"seed file not found: {path}") from exc
        except json.JSONDecodeError as exc:
            raise SeedParseError(f"seed file {path} is not valid JSON: {exc}") from exc
        if not isinstance(payload, dict) or not isinstance(payload.get("diets"), list):
            raise SeedParseError(f"seed file {path} must be an object with a 'diets' list")

        diets: dict[str, Diet] = {}
        for entry in payload["diets"]:
            if not isinstance(entry, dict):
                raise SeedParseError(f"seed file {path}: every diet entry must be an object")
            name = entry.get("name")
            description = entry.get("description", "")
            ingredients = entry.get("forbidden_ingredients", [])
            if not isinstance(name, str) or not isinstance(description, str) \
                    or not isinstance(ingredients, list) \
                    or not all(isinstance(i, str) for i in ingredients):
                raise SeedParseError(f"seed file {path}: malformed diet entry {name!r}")
            diet = _validate_diet(name, description, ingredients, error=SeedValidationError)
            if diet.name in diets:
                raise SeedValidationError(f"duplicate diet name in seed file: {diet.name!r}")
            diets[diet.name] = diet

        with self._lock:
            for stale in list(self._diets):
                if stale not in diets:
                    self._store.delete(_COLLECTION, stale)
            for diet in diets.values():
                self._store.put(_COLLECTION, diet.name, diet.to_dict())
            self._diets = diets
            return self._bump()

    @classmethod
    def from_seed(cls, path: str | Path, store: DocumentStore | None = None) -> "Catalog":
        catalog = cls(store)
        catalog.load_seed(path)
        return catalog

    def upsert_diet(self, diet: Diet, *, role: str = ROLE_MEMBER) -> int:
        """Insert or fully replace a diet by name; returns the new version."""
        if role != ROLE_ADMIN:
            raise Unauthorized("only administrators may modify the diet catalog")
        validated = _validate_diet(diet.name, diet.description, diet.forbidden_ingredients)
        with self._lock:
            self._store.put(_COLLECTION, validated.name, validated.to_dict())
            self._diets[validated.name] = validated
            return self._bump()

    def delete_diet(self, name: str, *, role: str = ROLE_MEMBER) -> int:
        """Remove a diet; profiles still naming it are simply skipped later."""
        if role != ROLE_ADMIN:
            raise Unauthorized("only administrators may modify the diet catalog")
        with self._lock:
            if name not in self._diets:
                raise DietNotFound(f"no diet named {name!r}")
            del self._diets[name]
            self._store.delete(_COLLECTION, name)
            return self._bump()
