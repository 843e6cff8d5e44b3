"""Key-value run configuration.

All defaults live in one packaged file (defaults.cfg).  A user file passed
with --config overrides values; keys not present in the defaults are
rejected so typos cannot silently change a run.
"""

from __future__ import annotations

from importlib import resources
from pathlib import Path


class ConfigError(ValueError):
    """Malformed config file or unknown key."""


def _parse(text: str, source: str) -> dict[str, str]:
    values: dict[str, str] = {}
    for number, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{number}: expected key = value")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not key or not value:
            raise ConfigError(f"{source}:{number}: empty key or value")
        if key in values:
            raise ConfigError(f"{source}:{number}: duplicate key {key!r}")
        values[key] = value
    return values


def load_defaults() -> dict[str, str]:
    text = resources.files("indicvox").joinpath("defaults.cfg").read_text("utf-8")
    return _parse(text, "defaults.cfg")


def load_config(path: str | Path | None = None) -> dict[str, str]:
    """Packaged defaults overlaid with an optional user file."""
    values = load_defaults()
    if path is not None:
        overrides = _parse(Path(path).read_text(encoding="utf-8"), str(path))
        unknown = set(overrides) - set(values)
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        values.update(overrides)
    return values
