"""
This script is used to test the shape_model_director module using pytest.
"""
# Built-in/Generic Imports
import os
import pytest

# Libraries
import numpy as np

# Local Functions
from morph3dkit import (
    HOLE,
    DepthMap,
    GridSpec,
    build_model,
    fit_coefficients,
    reconstruct,
    explained_variance,
    reconstruction_rms,
    save_model,
    load_model,
)


__author__ = "IncognitoCoding"
__copyright__ = "Copyright 2022, test_shape_model_director"
__credits__ = ["IncognitoCoding"]
__license__ = "MIT"
__version__ = "0.3"
__maintainer__ = "IncognitoCoding"
__status__ = "Production"

SMALL_GRID = GridSpec(width=6, height=5, origin_x=-4.5, origin_y=-3.75, spacing_x=1.5, spacing_y=1.5)


def _pattern_faces():
    rng = np.random.default_rng(0)
    mean = rng.normal(20.0, 3.0, size=SMALL_GRID.shape)
    pattern = rng.normal(0.0, 1.0, size=SMALL_GRID.shape)
    return mean, pattern, [DepthMap(SMALL_GRID, mean + pattern), DepthMap(SMALL_GRID, mean - pattern)]


def _random_faces(count: int = 8):
    rng = np.random.default_rng(1)
    return [DepthMap(SMALL_GRID, rng.normal(10.0, 2.0, size=SMALL_GRID.shape)) for _ in range(count)]


# ############################################################
# ######Section Test Part 1 (Successful Value Checking)#######
# ############################################################


def test_1_build_model():
    """Tests two faces mean +/- u give one component parallel to u."""
    mean, pattern, faces = _pattern_faces()
    model = build_model(faces, k=1)
    unit = pattern.ravel() / np.linalg.norm(pattern)
    assert abs(abs(float(model.basis[0] @ unit)) - 1.0) <= 1e-9
    assert np.allclose(model.mean, mean.ravel(), atol=1e-9)


def test_1_1_build_model():
    """Tests the components are orthonormal and the sigmas non-increasing."""
    model = build_model(_random_faces(), k=5)
    assert np.allclose(model.basis @ model.basis.T, np.eye(5), atol=1e-9)
    assert np.all(np.diff(model.sigmas) <= 0.0)
    assert 0.0 < float(explained_variance(model).sum()) <= 1.0 + 1e-12


def test_1_2_build_model(registered_maps):
    """Tests more components never reconstruct training faces worse."""
    faces = list(registered_maps.values())
    small = build_model(faces, k=2)
    large = build_model(faces, k=8)
    small_rms = np.mean([reconstruction_rms(small, face) for face in faces])
    large_rms = np.mean([reconstruction_rms(large, face) for face in faces])
    assert large_rms <= small_rms + 1e-9


def test_1_fit_coefficients():
    """Tests fitting mean + 2 sigma_1 component_1 gives (2, 0, ...)."""
    model = build_model(_random_faces(), k=4)
    face = model._to_depth_map(model.mean + 2.0 * model.sigmas[0] * model.basis[0])
    assert np.allclose(fit_coefficients(model, face).values, [2.0, 0.0, 0.0, 0.0], atol=1e-9)


def test_1_1_fit_coefficients():
    """Tests a training face is reproduced with a full component count."""
    faces = _random_faces(6)
    model = build_model(faces, k=5)
    assert reconstruction_rms(model, faces[2]) <= 1e-6


def test_1_2_fit_coefficients():
    """Tests a face with holes still fits by least squares over its observed cells."""
    model = build_model(_random_faces(), k=2)
    face = reconstruct(model, [0.7, -1.1])
    cells = np.array(face.cells)
    cells[0, :3] = HOLE
    assert np.allclose(fit_coefficients(model, DepthMap(SMALL_GRID, cells)).values, [0.7, -1.1], atol=1e-9)


def test_1_reconstruct():
    """Tests reconstruct and fit invert each other and the model is linear."""
    model = build_model(_random_faces(), k=3)
    a = np.array([0.5, -1.0, 2.0])
    b = np.array([-0.25, 0.3, 1.0])
    assert np.allclose(fit_coefficients(model, reconstruct(model, a)).values, a, atol=1e-9)
    summed = reconstruct(model, a).cells + reconstruct(model, b).cells - model.mean_face.cells
    assert np.allclose(summed, reconstruct(model, a + b).cells, atol=1e-9)


def test_1_save_model(tmp_path):
    """Tests a saved model loads back equal."""
    model = build_model(_random_faces(), k=3)
    path = os.path.join(str(tmp_path), "model.npz")
    save_model(model, path)
    loaded = load_model(path)
    assert loaded.grid == model.grid
    assert np.array_equal(loaded.support, model.support)
    assert np.allclose(loaded.basis, model.basis, atol=0.0)
    assert loaded.n_training == model.n_training


# ############################################################
# ######Section Test Part 2 (Error/Catch Value Checking)######
# ############################################################


def test_2_build_model():
    """Tests k equal to the face count."""
    with pytest.raises(Exception) as excinfo:
        build_model(_random_faces(4), k=4)
    assert """The component count is not supported by the training faces.""" in str(excinfo.value)


def test_2_1_build_model():
    """Tests identical faces that do not vary."""
    face = _random_faces(1)[0]
    with pytest.raises(Exception) as excinfo:
        build_model([face, face, face], k=1)
    assert """The training faces do not vary along the requested components.""" in str(excinfo.value)


def test_2_2_build_model():
    """Tests faces on different grids."""
    other = DepthMap(GridSpec(width=6, height=5), np.zeros((5, 6)))
    with pytest.raises(Exception) as excinfo:
        build_model([_random_faces(1)[0], other], k=1)
    assert """The depth maps do not share one grid specification.""" in str(excinfo.value)


def test_2_reconstruct():
    """Tests a coefficient vector of the wrong length."""
    model = build_model(_random_faces(), k=3)
    with pytest.raises(Exception) as excinfo:
        reconstruct(model, [1.0, 2.0])
    assert """The coefficient vector length does not match the model.""" in str(excinfo.value)


def test_2_load_model(tmp_path):
    """Tests loading a file that is not a model container."""
    path = os.path.join(str(tmp_path), "broken.npz")
    with open(path, "w") as file:
        file.write("not a model")
    with pytest.raises(Exception) as excinfo:
        load_model(path)
    assert """The model file is not a readable container.""" in str(excinfo.value)
