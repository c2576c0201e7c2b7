import json
from copy import deepcopy
from pathlib import Path
from typing import Any

from pydantic import ValidationError

# exceptions
from exceptions.ConfigurationException import ConfigurationException, UnknownNameError
from models.factory import MODEL_KINDS
from problems.registry import PROBLEMS
from schemas.experiment_schema import ExperimentConfig


def parse_value(text: str) -> Any:
    """JSON when it parses (numbers, lists, booleans, null), the raw string otherwise."""
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def set_path(payload: dict, dotted: str, value: Any) -> dict:
    """Copy of ``payload`` with ``value`` stored at a dotted path such as ``model.d_model``."""
    payload = deepcopy(payload)
    keys = dotted.split(".")
    node = payload
    for key in keys[:-1]:
        child = node.get(key)
        if child is None:
            child = node[key] = {}
        if not isinstance(child, dict):
            raise ConfigurationException(f"cannot set '{dotted}': '{key}' is not a section")
        node = child
    node[keys[-1]] = value
    return payload


def apply_overrides(payload: dict, overrides: list[str]) -> dict:
    for item in overrides:
        path, sep, text = item.partition("=")
        if not sep or not path:
            raise ConfigurationException(f"override '{item}' is not of the form path=value")
        payload = set_path(payload, path.strip(), parse_value(text.strip()))
    return payload


def validate_config(payload: dict) -> ExperimentConfig:
    problem = payload.get("problem")
    if problem not in PROBLEMS:
        raise UnknownNameError(f"unknown problem '{problem}', expected one of {sorted(PROBLEMS)}")
    kind = (payload.get("model") or {}).get("kind")
    if kind not in MODEL_KINDS:
        raise UnknownNameError(f"unknown model kind '{kind}', expected one of {MODEL_KINDS}")
    try:
        return ExperimentConfig.model_validate(payload)
    except ValidationError as error:
        raise ConfigurationException(str(error)) from error


def read_payload(path: Path) -> dict:
    path = Path(path)
    if not path.exists():
        raise ConfigurationException(f"config file {path} does not exist")
    try:
        payload = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as error:
        raise ConfigurationException(f"{path} is not valid JSON: {error}") from error
    # a config echo wraps the config next to its hash
    if isinstance(payload, dict) and "config" in payload and "content_hash" in payload:
        payload = payload["config"]
    if not isinstance(payload, dict):
        raise ConfigurationException(f"{path} must hold a JSON object")
    return payload


def load_config(path: Path, overrides: list[str] | None = None) -> ExperimentConfig:
    return validate_config(apply_overrides(read_payload(path), overrides or []))


def shortcut_overrides(output_dir: Path | None = None, seed: int | None = None) -> list[str]:
    """--output-dir and --seed as dotted overrides."""
    overrides = []
    if output_dir is not None:
        overrides.append(f"output_dir={json.dumps(str(output_dir))}")
    if seed is not None:
        overrides += [f"seeds.{name}={seed}" for name in ("init", "perturbation", "sampling")]
    return overrides


def with_iterations(config: ExperimentConfig, iterations: int) -> ExperimentConfig:
    """Replace the iteration count of the final optimizer phase."""
    payload = config.model_dump(mode="json")
    phases = payload["schedule"]["phases"]
    if not phases:
        raise ConfigurationException("the schedule has no phase to set iterations on")
    phases[-1]["iterations"] = iterations
    return validate_config(payload)
