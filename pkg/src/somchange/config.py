"""Tool configuration: defaults, optional JSON config file, env overrides."""

import json
import os
from dataclasses import dataclass, replace
from pathlib import Path

from .errors import DataError

ENV_PREFIX = "SOMCHANGE_"


@dataclass(frozen=True)
class ToolConfig:
    host: str = "127.0.0.1"
    port: int = 8000
    alpha: float = 0.05
    percentile: float = 0.8
    store_dir: str = "models"


_FIELD_TYPES = {"host": str, "port": int, "alpha": float, "percentile": float, "store_dir": str}
_ENV_NAMES = {
    "host": "HOST",
    "port": "PORT",
    "alpha": "ALPHA",
    "percentile": "PERCENTILE",
    "store_dir": "STORE",
}


def load_config(path=None, env=None) -> ToolConfig:
    """Defaults, overridden by the JSON config file (``path`` argument or
    ``SOMCHANGE_CONFIG``), overridden by ``SOMCHANGE_*`` env variables."""
    env = os.environ if env is None else env
    cfg = ToolConfig()

    path = path or env.get(ENV_PREFIX + "CONFIG")
    if path:
        file = Path(path)
        if not file.is_file():
            raise DataError(f"config file not found: {file}")
        try:
            loaded = json.loads(file.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise DataError(f"invalid config JSON in {file}: {exc}") from exc
        unknown = set(loaded) - set(_FIELD_TYPES)
        if unknown:
            raise DataError(f"unknown config keys: {sorted(unknown)}")
        cfg = replace(cfg, **{k: _FIELD_TYPES[k](v) for k, v in loaded.items()})

    overrides = {}
    for field, suffix in _ENV_NAMES.items():
        value = env.get(ENV_PREFIX + suffix)
        if value is not None:
            try:
                overrides[field] = _FIELD_TYPES[field](value)
            except ValueError as exc:
                raise DataError(f"bad {ENV_PREFIX + suffix} value {value!r}: {exc}") from exc
    return replace(cfg, **overrides)
