"""Service configuration: TOML file plus ``DIETCHECK_*`` environment overrides."""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .catalog import default_seed_path
from .errors import ValidationError


@dataclass
class ServiceConfig:
    host: str = "127.0.0.1"
    port: int = 8000
    seed_path: Path = field(default_factory=default_seed_path)
    store_path: Path | None = None
    admin_email: str = "admin@dietcheck.local"
    admin_password: str = "change-me-now"
    ocr_command: str | None = None
    session_ttl_seconds: float = 24 * 3600.0
    ui_dir: Path | None = None


_ENV_PREFIX = "DIETCHECK_"

_FIELDS = {
    "host": str,
    "port": int,
    "seed_path": Path,
    "store_path": Path,
    "admin_email": str,
    "admin_password": str,
    "ocr_command": str,
    "session_ttl_seconds": float,
    "ui_dir": Path,
}


def load_config(path: str | Path | None = None,
                env: dict[str, str] | None = None) -> ServiceConfig:
    """Read config from an optional TOML file, then apply env overrides.

    Environment variables are the upper-cased field names with the
    ``DIETCHECK_`` prefix, e.g. ``DIETCHECK_PORT`` or ``DIETCHECK_SEED_PATH``.
    """
    env = os.environ if env is None else env
    values: dict[str, object] = {}
    if path is not None:
        path = Path(path)
        try:
            raw = tomllib.loads(path.read_text(encoding="utf-8"))
        except FileNotFoundError as exc:
            raise ValidationError(f"config file not found: {path}") from exc
        except tomllib.TOMLDecodeError as exc:
            raise ValidationError(f"config file {path} is not valid TOML: {exc}") from exc
        for key, value in raw.items():
            if key not in _FIELDS:
                raise ValidationError(f"unknown config key {key!r} in {path}")
            values[key] = _FIELDS[key](value)
    for key, caster in _FIELDS.items():
        raw_value = env.get(_ENV_PREFIX + key.upper())
        if raw_value is not None:
            try:
                values[key] = caster(raw_value)
            except ValueError as exc:
                raise ValidationError(f"bad value for {_ENV_PREFIX + key.upper()}: {raw_value!r}") from exc
    return ServiceConfig(**values)  # type: ignore[arg-type]
