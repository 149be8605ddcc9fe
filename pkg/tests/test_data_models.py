"""
Tests for data models
"""
import json

import numpy as np
import pytest

from src.cplx_geom import ProjectivePoint
from src.data_models import DocumentError, ExperimentConfig, InputDocument
from src.utils import matrix_to_json, random_unitary


def test_experiment_config_defaults():
    config = ExperimentConfig()
    assert config.seed == 0
    assert config.tol == 1e-6
    assert (config.K, config.L, config.n) == (30, 4, 3)
    assert config.eps_schedule == "2^-k"
    assert config.budget == 20000
    assert config.starts == 8
    assert config.delta is True
    assert config.format == "csv"
    assert config.drift_value() == 0.1


def test_experiment_config_validation():
    """Invalid values are rejected naming the field"""
    with pytest.raises(DocumentError, match="config.n"):
        ExperimentConfig(n=0)
    with pytest.raises(DocumentError, match="config.tol"):
        ExperimentConfig(tol=-1.0)
    with pytest.raises(DocumentError, match="config.seed"):
        ExperimentConfig(seed=1.5)
    with pytest.raises(DocumentError, match="config.format"):
        ExperimentConfig(format="xml")
    with pytest.raises(DocumentError, match="Unknown config keys"):
        ExperimentConfig.from_dict({"n": 3, "colour": "red"})


def test_experiment_config_drift_matrix():
    config = ExperimentConfig(drift=[[0.1, 0], [0, -0.1]])
    assert np.allclose(config.drift_value(), np.diag([0.1, -0.1]))
    with pytest.raises(DocumentError, match="config.drift"):
        ExperimentConfig(drift=[[1, 2], [3]])


def test_experiment_config_merged():
    """None values leave the field alone"""
    config = ExperimentConfig().merged({"n": 5, "seed": None, "tol": 1e-3})
    assert config.n == 5
    assert config.seed == 0
    assert config.tol == 1e-3


def test_experiment_config_save_load(tmp_path):
    path = tmp_path / "global.json"
    assert ExperimentConfig.load(path) == ExperimentConfig()

    ExperimentConfig(seed=7, L=2, format="table").save(path)
    loaded = ExperimentConfig.load(path)
    assert loaded.seed == 7
    assert loaded.L == 2
    assert loaded.format == "table"

    path.write_text("{not json")
    with pytest.raises(DocumentError):
        ExperimentConfig.load(path)


def test_input_document_points():
    document = InputDocument.from_dict({"points": [[0, 0], 1, [0.5, 0.8660254037844386], "inf"]})
    assert len(document.points) == 4
    assert document.points[0] == ProjectivePoint.from_complex(0)
    assert document.points[1] == ProjectivePoint.from_complex(1)
    assert document.points[3].is_infinity
    assert document.n is None
    assert document.dimension(default=3) == 3


def test_input_document_errors():
    """Each schema violation names the offending field"""
    with pytest.raises(DocumentError, match="points\\[1\\]"):
        InputDocument.from_dict({"points": [[0, 0], "zero"]})
    with pytest.raises(DocumentError, match="Unknown document fields"):
        InputDocument.from_dict({"pts": []})
    with pytest.raises(DocumentError, match="n must be"):
        InputDocument.from_dict({"n": 0})
    with pytest.raises(DocumentError, match="flags\\[0\\]"):
        InputDocument.from_dict({"n": 2, "flags": [[[1, 0, 0], [0, 1, 0], [0, 0, 1]]]})
    with pytest.raises(DocumentError, match="flags\\[0\\]"):
        InputDocument.from_dict({"flags": [[[1, 1], [1, 1]]]})
    with pytest.raises(DocumentError, match="same size"):
        InputDocument.from_dict({"flags": [[[1]], [[1, 0], [0, 1]]]})
    with pytest.raises(DocumentError, match="Invalid JSON"):
        InputDocument.loads("[1, 2")
    with pytest.raises(DocumentError, match="config"):
        InputDocument.from_dict({"config": {"L": -1}})


def test_input_document_flags_survive_save_load(tmp_path, rng):
    """Orthonormal flag bases are written and read back unchanged"""
    bases = [random_unitary(rng, 3) for _ in range(4)]
    document = InputDocument.from_dict({
        "n": 3,
        "flags": [matrix_to_json(basis) for basis in bases],
        "config": {"seed": 4},
    })
    path = tmp_path / "flags.json"
    document.save(path)
    loaded = InputDocument.load(path)

    assert loaded.dimension() == 3
    assert loaded.config == {"seed": 4}
    for original, flag in zip(bases, loaded.flags):
        assert np.array_equal(flag.basis, original)
    assert json.loads(path.read_text())["n"] == 3


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
