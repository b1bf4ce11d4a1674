"""
Experiment configuration loading from TOML or JSON files
"""

import json
import logging
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from pathlib import Path
from typing import Any, Dict, Optional, Union

from pydantic import ValidationError

from ..models.experiment_models import ExperimentConfig
from ..utils.validators import ConfigurationError

logger = logging.getLogger(__name__)


def _describe(error: ValidationError) -> str:
    parts = []
    for item in error.errors():
        location = ".".join(str(part) for part in item["loc"]) or "config"
        parts.append(f"{location}: {item['msg']}")
    return "; ".join(parts)


def build_config(data: Dict[str, Any]) -> ExperimentConfig:
    """
    Validate a configuration mapping

    Args:
        data: Parsed configuration document

    Returns:
        ExperimentConfig

    Raises:
        ConfigurationError: naming every offending field
    """
    try:
        return ExperimentConfig.model_validate(data)
    except ValidationError as e:
        raise ConfigurationError(f"Invalid experiment configuration: {_describe(e)}") from e


def load_config(
    path: Union[str, Path],
    overrides: Optional[Dict[str, Any]] = None
) -> ExperimentConfig:
    """
    Read an experiment file (.toml or .json)

    Args:
        path: Configuration file; an empty file yields the default system
        overrides: Dotted keys replaced after parsing, e.g. {"link.ase_enabled": False}

    Returns:
        ExperimentConfig

    Raises:
        ConfigurationError: if the file is unreadable, unparsable or invalid
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigurationError(f"Cannot read configuration {path}: {e}") from e

    try:
        if path.suffix.lower() == ".json":
            data = json.loads(text) if text.strip() else {}
        else:
            data = tomllib.loads(text)
    except (tomllib.TOMLDecodeError, json.JSONDecodeError) as e:
        raise ConfigurationError(f"Cannot parse configuration {path}: {e}") from e

    for dotted, value in (overrides or {}).items():
        node = data
        *parents, leaf = dotted.split(".")
        for key in parents:
            node = node.setdefault(key, {})
        node[leaf] = value

    config = build_config(data)
    logger.debug(f"Loaded configuration '{config.name}' from {path}")
    return config
