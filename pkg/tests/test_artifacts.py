import numpy as np
import pytest

from conftest import small_mlp
from exceptions.ModelException import ParamsFileError
from repository.artifact_repo import ArtifactRepository
from utils.csv_utils import read_csv


def test_params_survive_save_and_load(tmp_path, mlp):
    params = mlp.init_params(3)
    path = ArtifactRepository.save_params(tmp_path, params, mlp.describe())
    loaded = ArtifactRepository.load_params(path, mlp.layout)
    np.testing.assert_array_equal(loaded.values, params.values)
    assert loaded.content_hash() == params.content_hash()


def test_params_for_another_layout_are_rejected(tmp_path, mlp):
    path = ArtifactRepository.save_params(tmp_path, mlp.init_params(0))
    with pytest.raises(ParamsFileError):
        ArtifactRepository.load_params(path, small_mlp(width=9).layout)
    with pytest.raises(ParamsFileError):
        ArtifactRepository.load_params(tmp_path / "missing.npz")


def test_csv_format(tmp_path):
    points = np.array([[0.0, 0.0], [1.0 / 3.0, 0.5]])
    path = ArtifactRepository.save_error_map(tmp_path, points, np.array([0.1, -2.0]))
    raw = path.read_bytes()
    assert b"\r" not in raw
    lines = raw.decode().splitlines()
    assert lines[0] == "x,t,error"
    assert lines[2].split(",")[0] == "0.33333333333333331"
    header, table = read_csv(path)
    assert header == ["x", "t", "error"]
    assert table[1, 0] == 1.0 / 3.0


def test_trace_iteration_column_is_integer(tmp_path):
    rows = [
        {"iteration": 0, "loss": 1.5},
        {"iteration": 1, "loss": 0.75},
    ]
    path = ArtifactRepository.save_trace(tmp_path, ["iteration", "loss"], rows)
    assert path.read_text().splitlines() == ["iteration,loss", "0,1.5", "1,0.75"]


def test_snapshot_keeps_iteration_and_arrays(tmp_path):
    path = ArtifactRepository.save_snapshot(tmp_path, 4, np.array([np.nan, 1.0]), None)
    with np.load(path) as data:
        assert int(data["iteration"]) == 4
        assert np.isnan(data["params"][0])
        assert "gradient" not in data
