from collections.abc import Mapping

from pydantic import TypeAdapter, ValidationError

# exceptions
from exceptions.ConfigurationException import ConfigurationException, UnknownNameError
from models.base_model import FieldModel
from models.mlp_model import MLPModel
from models.perturbation import PerturbationBatch
from models.propinn_model import ProPINNModel
from schemas.model_schema import MLPConfig, ModelConfig, ProPINNConfig

MODEL_KINDS = ("pinn", "propinn")

_config_adapter = TypeAdapter(ModelConfig)


def parse_model_config(payload: Mapping) -> MLPConfig | ProPINNConfig:
    kind = payload.get("kind")
    if kind not in MODEL_KINDS:
        raise UnknownNameError(f"unknown model kind '{kind}', expected one of {MODEL_KINDS}")
    try:
        return _config_adapter.validate_python(dict(payload))
    except ValidationError as error:
        raise ConfigurationException(str(error)) from error


def build_model(
    config: MLPConfig | ProPINNConfig | Mapping,
    profile: str = "desk",
    perturbations: PerturbationBatch | None = None,
) -> FieldModel:
    if isinstance(config, Mapping):
        config = parse_model_config(config)
    config = config.for_profile(profile)
    if isinstance(config, ProPINNConfig):
        return ProPINNModel(config, perturbations)
    return MLPModel(config)
