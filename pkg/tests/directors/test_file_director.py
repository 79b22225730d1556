"""
This script is used to test the file_director module using pytest.
"""
# Built-in/Generic Imports
import json

# Libraries
import pytest
import numpy as np

# Local Functions
from morph3dkit import read_model_file, write_json_file, write_model_file, write_text_file


__author__ = "IncognitoCoding"
__copyright__ = "Copyright 2022, test_file_director"
__credits__ = ["IncognitoCoding"]
__license__ = "MIT"
__version__ = "0.4"
__maintainer__ = "IncognitoCoding"
__status__ = "Production"


# ############################################################
# ######Section Test Part 1 (Successful Value Checking)#######
# ############################################################


def test_1_write_text_file(tmp_path):
    """Tests parent folders are created and content is replaced."""
    path = tmp_path / "nested" / "folder" / "note.txt"
    write_text_file(str(path), "first\n")
    write_text_file(str(path), "second\r\n")
    assert path.read_bytes() == b"second\r\n"


def test_1_write_json_file(tmp_path):
    """Tests key order does not change the written bytes."""
    first, second = tmp_path / "a.json", tmp_path / "b.json"
    write_json_file(str(first), {"b": 1, "a": [1.5, None]})
    write_json_file(str(second), {"a": [1.5, None], "b": 1})
    assert first.read_bytes() == second.read_bytes()
    assert json.loads(first.read_text(encoding="utf-8")) == {"a": [1.5, None], "b": 1}


def test_1_write_model_file(tmp_path):
    """Tests a container keeps its arrays and drops the kind and version tags on read."""
    path = str(tmp_path / "model.npz")
    arrays = {"mean": np.arange(4.0), "basis": np.eye(3)}
    write_model_file(path, "shape_model", 1, arrays)
    loaded = read_model_file(path, "shape_model", 1, ("mean", "basis"))
    assert sorted(loaded) == ["basis", "mean"]
    assert np.array_equal(loaded["basis"], np.eye(3))


# ############################################################
# ######Section Test Part 2 (Error/Catch Value Checking)######
# ############################################################


def test_2_write_text_file(tmp_path):
    """Tests an incorrect content type."""
    with pytest.raises(Exception) as excinfo:
        write_text_file(str(tmp_path / "x.txt"), 5)
    assert """The object value '5' is not an instance of the required class(es) or subclass(es).""" in str(
        excinfo.value
    )


def test_2_read_model_file(tmp_path):
    """Tests a container of another kind."""
    path = str(tmp_path / "model.npz")
    write_model_file(path, "likelihood_matcher", 1, {"thresholds": np.zeros(2)})
    with pytest.raises(Exception) as excinfo:
        read_model_file(path, "shape_model", 1, ("thresholds",))
    assert """The model file holds a different model kind or format version.""" in str(excinfo.value)


def test_2_1_read_model_file(tmp_path):
    """Tests a container without a required array."""
    path = str(tmp_path / "model.npz")
    write_model_file(path, "shape_model", 1, {"mean": np.zeros(2)})
    with pytest.raises(Exception) as excinfo:
        read_model_file(path, "shape_model", 1, ("mean", "basis"))
    assert """The model file is missing arrays.""" in str(excinfo.value)


def test_2_2_read_model_file(tmp_path):
    """Tests a file that is not a container."""
    path = tmp_path / "model.npz"
    path.write_text("not a container", encoding="utf-8")
    with pytest.raises(Exception) as excinfo:
        read_model_file(str(path), "shape_model", 1, ())
    assert """The model file is not a readable container.""" in str(excinfo.value)
