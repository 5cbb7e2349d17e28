"""Experiment configuration: defaults < config file < environment < command line."""

import logging
from pathlib import Path
from typing import Any, Optional

import yaml

from ..errors import ArgumentError
from ..settings import dense_limit_from_env, workers_from_env
from .structs import ExperimentConfig, ExperimentMode

logger = logging.getLogger(__name__)

_YAML_SUFFIXES = {".yaml", ".yml"}
# kept verbatim: a bit string like 1010 must not turn into an int
_STRING_KEYS = {"initial_state", "out"}
# command-line spellings accepted in files
_KEY_ALIASES = {"disorder": "disorder_list", "delta": "anisotropy_delta", "j": "coupling_j"}


def load_config_file(path: Path) -> dict[str, Any]:
    """Read a flat configuration file.

    Plain files hold `key=value` lines; `#` starts a comment. Values are typed the way
    YAML types scalars, so `realizations=50` is an int and `svg=true` a bool. Files
    ending in .yaml or .yml may instead hold a flat YAML mapping. Dashes in keys are
    read as underscores.

    Raises:
        ArgumentError: If the file is missing or malformed
    """
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise ArgumentError(f"Cannot read config file '{path}': {e}")

    if Path(path).suffix.lower() in _YAML_SUFFIXES:
        try:
            loaded = yaml.safe_load(text)
        except yaml.YAMLError as e:
            raise ArgumentError(f"Config file '{path}' is not valid YAML: {e}")
        if loaded is None:
            return {}
        if not isinstance(loaded, dict):
            raise ArgumentError(f"Config file '{path}' must hold a mapping of keys to values")
        return {_normalize_key(str(k)): v for k, v in loaded.items()}

    values = {}
    for number, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep or not key.strip():
            raise ArgumentError(f"{path}:{number}: expected 'key=value', got '{raw_line.strip()}'")
        key = _normalize_key(key.strip())
        value = value.strip()
        values[key] = value if key in _STRING_KEYS and value else _parse_scalar(value, path, number)
    return values


def _normalize_key(key: str) -> str:
    key = key.replace("-", "_")
    return _KEY_ALIASES.get(key, key)


def _parse_scalar(value: str, path: Path, number: int) -> Any:
    if not value:
        return None
    try:
        parsed = yaml.safe_load(value)
    except yaml.YAMLError:
        raise ArgumentError(f"{path}:{number}: cannot parse value '{value}'")
    return parsed


def env_overrides() -> dict[str, Any]:
    """Worker count and dense limit from the environment, when set."""
    overrides = {}
    workers = workers_from_env()
    if workers is not None:
        overrides["workers"] = workers
    dense_limit = dense_limit_from_env()
    if dense_limit is not None:
        overrides["dense_limit"] = dense_limit
    return overrides


def resolve_config(
    mode: ExperimentMode,
    cli_values: dict[str, Any],
    config_path: Optional[Path] = None,
) -> ExperimentConfig:
    """Merge all configuration sources into a validated ExperimentConfig.

    Args:
        mode: Experiment to run
        cli_values: Values given on the command line; None means "not given"
        config_path: Optional config file

    Raises:
        ArgumentError: If a source is malformed or names an unknown key
    """
    merged: dict[str, Any] = {}
    if config_path is not None:
        from_file = load_config_file(config_path)
        from_file.pop("mode", None)
        unknown = sorted(set(from_file) - set(ExperimentConfig.model_fields))
        if unknown:
            raise ArgumentError(f"Unknown keys in config file '{config_path}': {', '.join(unknown)}")
        merged.update({k: v for k, v in from_file.items() if v is not None})
        logger.debug("Loaded %d settings from %s", len(from_file), config_path)
    merged.update(env_overrides())
    merged.update({k: v for k, v in cli_values.items() if v is not None})
    merged["mode"] = mode
    return ExperimentConfig(**merged)
