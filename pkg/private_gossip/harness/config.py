"""
Configuration file loading and CLI merging.

Config files are line-oriented ``key = value`` text with ``#`` comments.
Keys are either ExperimentConfig field names or the CLI flag names (with
``-`` or ``_``). Values given on the command line override the file.
"""

import logging
from pathlib import Path
from typing import Any, Dict, List, Mapping, Union

from pydantic import ValidationError

from private_gossip.harness.schemas import ExperimentConfig
from private_gossip.utils.errors import ConfigError

logger = logging.getLogger(__name__)

# CLI flag name -> ExperimentConfig field
ALIASES = {
    "iters": "iterations",
    "seed": "base_seed",
    "edges": "edges_path",
    "window": "fit_window",
}

LIST_FIELDS = {"values", "sigma2", "phi", "sigma"}
INT_FIELDS = {"n", "graph_seed", "iterations", "seeds", "base_seed", "stride", "workers"}
FLOAT_FIELDS = {"fit_window"}


def canonical_key(key: str) -> str:
    name = key.strip().lstrip("-").replace("-", "_")
    return ALIASES.get(name, name)


def _parse_number_list(text: str, key: str) -> Union[float, List[float]]:
    parts = [p.strip() for p in text.split(",") if p.strip()]
    try:
        numbers = [float(p) for p in parts]
    except ValueError as exc:
        raise ConfigError(f"{key}: expected a number or comma-separated numbers, got {text!r}") from exc
    if not numbers:
        raise ConfigError(f"{key}: empty value")
    return numbers[0] if len(numbers) == 1 else numbers


def coerce_value(key: str, value: Any) -> Any:
    """Turn raw text into the type the config field expects."""
    if not isinstance(value, str):
        return value
    text = value.strip()
    try:
        if key in INT_FIELDS:
            return int(text)
        if key in FLOAT_FIELDS:
            return float(text)
    except ValueError as exc:
        raise ConfigError(f"{key}: expected a number, got {text!r}") from exc
    if key == "phi" and (text == "threshold" or text.startswith("corollary:")):
        return text
    if key == "values":
        parsed = _parse_number_list(text, key)
        return parsed if isinstance(parsed, list) else [parsed]
    if key in LIST_FIELDS:
        return _parse_number_list(text, key)
    if key == "radius" and text != "auto":
        try:
            return float(text)
        except ValueError as exc:
            raise ConfigError(f"radius: expected 'auto' or a number, got {text!r}") from exc
    return text


def load_config_file(path: Union[str, Path]) -> Dict[str, Any]:
    """Parse a key = value file into canonical keys with coerced values."""
    try:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc.strerror}") from exc

    entries: Dict[str, Any] = {}
    for lineno, line in enumerate(lines, start=1):
        content = line.split("#", 1)[0].strip()
        if not content:
            continue
        if "=" not in content:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {content!r}")
        key, value = (part.strip() for part in content.split("=", 1))
        if not key:
            raise ConfigError(f"{path}:{lineno}: missing key")
        name = canonical_key(key)
        entries[name] = coerce_value(name, value)
    logger.debug("[HARNESS] loaded %d keys from %s", len(entries), path)
    return entries


def merge_settings(file_settings: Mapping[str, Any], cli_settings: Mapping[str, Any]) -> Dict[str, Any]:
    """CLI values (those not None) override file values."""
    merged = dict(file_settings)
    for key, value in cli_settings.items():
        if value is None:
            continue
        name = canonical_key(key)
        if name in ("sigma", "sigma2"):
            merged.pop("sigma2" if name == "sigma" else "sigma", None)
        merged[name] = coerce_value(name, value)
    return merged


def split_runtime(settings: Dict[str, Any]) -> Dict[str, Any]:
    """Pop run-time knobs that are not part of the experiment identity."""
    runtime = {}
    if "workers" in settings:
        runtime["workers"] = settings.pop("workers")
    return runtime


def build_config(settings: Mapping[str, Any]) -> ExperimentConfig:
    """
    Validate merged settings into an ExperimentConfig.

    ``sigma`` (a standard deviation) is squared into ``sigma2``.
    """
    data = dict(settings)
    if "sigma" in data:
        sigma = data.pop("sigma")
        if "sigma2" in data:
            raise ConfigError("give either sigma or sigma2, not both")
        data["sigma2"] = [s * s for s in sigma] if isinstance(sigma, list) else sigma * sigma
    try:
        return ExperimentConfig(**data)
    except ValidationError as exc:
        problems = "; ".join(
            f"{'.'.join(str(p) for p in err['loc']) or 'config'}: {err['msg']}" for err in exc.errors()
        )
        raise ConfigError(f"invalid configuration: {problems}") from exc
