import json

import pytest

from exceptions.ConfigurationException import ConfigurationException, UnknownNameError
from repository.artifact_repo import ArtifactRepository
from schemas.model_schema import MLPConfig, ProPINNConfig
from utils.config_utils import (
    apply_overrides,
    load_config,
    parse_value,
    set_path,
    shortcut_overrides,
    validate_config,
    with_iterations,
)

BASE = {
    "name": "tiny",
    "problem": "convection",
    "model": {"kind": "pinn"},
    "seeds": {"init": 0, "perturbation": 0, "sampling": 0},
}


def test_parse_value_prefers_json():
    assert parse_value("3") == 3
    assert parse_value("[0.01, 0.02]") == [0.01, 0.02]
    assert parse_value("true") is True
    assert parse_value("reaction") == "reaction"


def test_set_path_copies_and_creates_sections():
    updated = set_path(BASE, "schedule.metrics_every", 5)
    assert updated["schedule"] == {"metrics_every": 5}
    assert "schedule" not in BASE
    with pytest.raises(ConfigurationException):
        set_path(BASE, "name.inner", 1)


def test_overrides_reach_the_validated_config():
    payload = apply_overrides(BASE, ["model.hidden_width=16", "problem=reaction"])
    config = validate_config(payload)
    assert config.problem == "reaction"
    assert config.model.hidden_width == 16
    with pytest.raises(ConfigurationException):
        apply_overrides(BASE, ["no-equals-sign"])


def test_profile_sets_missing_width():
    assert validate_config(BASE).model.hidden_width == 128
    full = validate_config(BASE | {"profile": "paper"})
    assert isinstance(full.model, MLPConfig)
    assert full.model.hidden_width == 512


@pytest.mark.parametrize(
    "payload",
    [
        BASE | {"problem": "burgers"},
        BASE | {"model": {"kind": "transformer"}},
    ],
)
def test_unknown_names_are_rejected(payload):
    with pytest.raises(UnknownNameError):
        validate_config(payload)


@pytest.mark.parametrize(
    "region_sizes",
    [[0.05, 0.01, 0.09], [0.0, 0.05, 0.09], [0.01, 0.05]],
)
def test_invalid_region_sizes(region_sizes):
    payload = BASE | {"model": {"kind": "propinn", "region_sizes": region_sizes}}
    with pytest.raises(ConfigurationException):
        validate_config(payload)


def test_default_perturbation_counts():
    config = validate_config(BASE | {"model": {"kind": "propinn"}})
    assert isinstance(config.model, ProPINNConfig)
    assert config.model.counts == (9, 25, 49)


def test_config_echo_reloads_to_the_same_config(tmp_path):
    config = validate_config(BASE | {"model": {"kind": "propinn"}})
    path = ArtifactRepository.save_config_echo(tmp_path, config)
    echo = json.loads(path.read_text())
    assert set(echo) == {"config", "content_hash"}
    assert load_config(path) == config


def test_missing_and_broken_files(tmp_path):
    with pytest.raises(ConfigurationException):
        load_config(tmp_path / "absent.json")
    broken = tmp_path / "broken.json"
    broken.write_text("{not json")
    with pytest.raises(ConfigurationException):
        load_config(broken)


def test_shortcuts_and_iterations(tmp_path):
    overrides = shortcut_overrides(tmp_path, 7)
    config = validate_config(apply_overrides(BASE, overrides))
    assert config.output_dir == tmp_path
    assert (config.seeds.init, config.seeds.perturbation, config.seeds.sampling) == (7, 7, 7)

    two_phase = validate_config(
        BASE | {"schedule": {"phases": [{"kind": "adam", "iterations": 10}, {"kind": "lbfgs", "iterations": 10}]}}
    )
    shortened = with_iterations(two_phase, 3)
    assert [phase.iterations for phase in shortened.schedule.phases] == [10, 3]
