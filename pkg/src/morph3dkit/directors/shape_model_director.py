"""
This module is designed to build and use a linear PCA face shape model over registered depth maps.

Correspondence between faces comes from the shared depth grid. Cells that are
HOLE in any training face are left out of the model support.
"""
# Built-in/Generic Imports
import logging
from dataclasses import dataclass
from typing import List, Sequence, Union

# Libraries
import numpy as np
from fchecker.type import type_check

# Local Functions
from ..helpers.py_helper import get_function_name, summarize_value
from ..geometry.depth_map import DepthMap, GridSpec, HOLE, require_same_grid, depth_rms
from .file_director import write_model_file, read_model_file

# Exceptions
from fexception import FCustomException
from .exceptions import ModelFormatFailure

__author__ = "IncognitoCoding"
__copyright__ = "Copyright 2022, shape_model_director"
__credits__ = ["IncognitoCoding"]
__license__ = "MIT"
__version__ = "1.1"
__maintainer__ = "IncognitoCoding"
__status__ = "Production"

MODEL_KIND = "shape_model"
MODEL_FORMAT_VERSION = 1
# Components with a standard deviation at or below this are treated as absent.
SIGMA_FLOOR = 1e-9


class InsufficientData(Exception):
    """Exception raised when the training faces cannot support the requested model."""

    __module__ = "builtins"
    pass


class LengthMismatch(Exception):
    """Exception raised when a coefficient vector does not match the model component count."""

    __module__ = "builtins"
    pass


@dataclass(frozen=True, eq=False)
class ShapeModel:
    """
    Immutable PCA shape model.

    Attributes:
        grid (GridSpec):
        \t\\- The depth grid shared by every training face.
        support (np.ndarray):
        \t\\- (height, width) bool. Cells valid in every training face.
        mean (np.ndarray):
        \t\\- (n_support,) mean depth over the support.
        basis (np.ndarray):
        \t\\- (K, n_support) orthonormal rows.
        sigmas (np.ndarray):
        \t\\- (K,) per-component standard deviations, non-increasing.
        total_variance (float):
        \t\\- Total training variance over the support (all components).
        n_training (int):
        \t\\- Number of training faces.
    """

    grid: GridSpec
    support: np.ndarray
    mean: np.ndarray
    basis: np.ndarray
    sigmas: np.ndarray
    total_variance: float
    n_training: int

    def __post_init__(self) -> None:
        for name in ("support", "mean", "basis", "sigmas"):
            array = np.array(getattr(self, name))
            array.setflags(write=False)
            object.__setattr__(self, name, array)

    @property
    def k(self) -> int:
        return int(self.basis.shape[0])

    @property
    def mean_face(self) -> DepthMap:
        return self._to_depth_map(self.mean)

    @property
    def components(self) -> List[DepthMap]:
        """Basis elements as depth maps, HOLE outside the support."""
        return [self._to_depth_map(row) for row in self.basis]

    def _to_depth_map(self, values: np.ndarray) -> DepthMap:
        cells = np.full(self.grid.shape, HOLE)
        cells[self.support] = values
        return DepthMap(self.grid, cells)


@dataclass(frozen=True, eq=False)
class CoefficientVector:
    """Model coefficients in units of per-component standard deviations."""

    values: np.ndarray

    def __post_init__(self) -> None:
        values = np.array(self.values, dtype=np.float64).reshape(-1)
        if not np.all(np.isfinite(values)):
            exc_args = {
                "main_message": "The coefficient vector holds non-finite values.",
                "custom_type": LengthMismatch,
                "expected_result": "finite values",
                "returned_result": summarize_value(values),
            }
            raise LengthMismatch(FCustomException(message_args=exc_args, tb_remove_name="__post_init__"))
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return len(self.values)

    def blend(self, other: "CoefficientVector", alpha: float) -> "CoefficientVector":
        """alpha * self + (1 - alpha) * other."""
        return CoefficientVector(alpha * self.values + (1.0 - alpha) * other.values)


def _first_significant_positive(basis: np.ndarray) -> np.ndarray:
    """Flips each row so its first element above 1e-8 of the row maximum is positive."""
    for row in basis:
        magnitude = np.abs(row)
        first = int(np.argmax(magnitude > 1e-8 * magnitude.max()))
        if row[first] < 0:
            row *= -1.0
    return basis


def build_model(faces: Sequence[DepthMap], k: int) -> ShapeModel:
    """
    Builds a PCA shape model from registered depth maps.

    The support is the set of cells valid in every face. Components come from
    the SVD of the mean-centered face vectors over the support, with the first
    significant element of every component made positive.

    Args:
        faces (Sequence[DepthMap]):
        \t\\- Registered training faces on one grid.
        k (int):
        \t\\- Component count, 1 <= k <= len(faces) - 1.

    Raises:
        FTypeError (fexception):
        \t\\- The object value '{k}' is not an instance of the required class(es) or subclass(es).
        GridMismatch:
        \t\\- The depth maps do not share one grid specification.
        InsufficientData:
        \t\\- The component count is not supported by the training faces.
        InsufficientData:
        \t\\- The training faces share no valid cell.
        InsufficientData:
        \t\\- The training faces do not vary along the requested components.

    Returns:
        ShapeModel:
        \t\\- The model.
    """
    logger = logging.getLogger(__name__)
    logger.debug(f"=" * 20 + get_function_name() + "=" * 20)
    # Custom flowchart tracking. This is ideal for large projects that move a lot.
    # For any third-party modules, set the flow before making the function call.
    logger_flowchart = logging.getLogger("flowchart")
    logger_flowchart.debug(f"Flowchart --> Function: {get_function_name()}")

    type_check(value=faces, required_type=(list, tuple), tb_remove_name="build_model")
    type_check(value=k, required_type=int, tb_remove_name="build_model")

    logger.debug(
        "Passing parameters:\n"
        f"  - faces (list):\n        - {len(faces)} depth maps\n"
        f"  - k (int):\n        - {k}\n"
    )

    if len(faces) < 2 or k < 1 or k > len(faces) - 1:
        exc_args = {
            "main_message": "The component count is not supported by the training faces.",
            "custom_type": InsufficientData,
            "expected_result": "at least 2 faces and 1 <= k <= faces - 1",
            "returned_result": f"{len(faces)} faces, k={k}",
        }
        raise InsufficientData(FCustomException(message_args=exc_args, tb_remove_name="build_model"))
    grid = require_same_grid("build_model", *faces)

    support = np.logical_and.reduce([face.valid for face in faces])
    if not np.any(support):
        exc_args = {
            "main_message": "The training faces share no valid cell.",
            "custom_type": InsufficientData,
            "returned_result": f"{len(faces)} faces",
            "suggested_resolution": "Check the registration of the training faces.",
        }
        raise InsufficientData(FCustomException(message_args=exc_args, tb_remove_name="build_model"))

    data = np.stack([face.cells[support] for face in faces])
    mean = data.mean(axis=0)
    centered = data - mean
    _, singular, vt = np.linalg.svd(centered, full_matrices=False)
    sigmas = singular / np.sqrt(len(faces) - 1)
    total_variance = float(np.sum(sigmas**2))
    if sigmas[k - 1] <= SIGMA_FLOOR:
        exc_args = {
            "main_message": "The training faces do not vary along the requested components.",
            "custom_type": InsufficientData,
            "expected_result": f"sigma_{k} > {SIGMA_FLOOR}",
            "returned_result": float(sigmas[k - 1]),
        }
        raise InsufficientData(FCustomException(message_args=exc_args, tb_remove_name="build_model"))

    basis = _first_significant_positive(vt[:k].copy())
    model = ShapeModel(grid, support, mean, basis, sigmas[:k].copy(), total_variance, len(faces))
    logger.info(f"Built a {k}-component shape model from {len(faces)} faces over {int(support.sum())} cells")
    logger.debug(f"Returning value(s):\n  - Return = sigmas {summarize_value(model.sigmas)}")
    return model


def fit_coefficients(model: ShapeModel, face: DepthMap) -> CoefficientVector:
    """
    Projects a face onto the model.

    Coefficients are the least-squares fit of (face - mean) over the model
    support cells observed in the face, in sigma units. With the full support
    observed this is the orthogonal projection.

    Raises:
        FTypeError (fexception):
        \t\\- The object value '{face}' is not an instance of the required class(es) or subclass(es).
        GridMismatch:
        \t\\- The face is not on the model grid.
        InsufficientData:
        \t\\- The face does not overlap the model support.
    """
    logger = logging.getLogger(__name__)
    logger.debug(f"=" * 20 + get_function_name() + "=" * 20)
    # Custom flowchart tracking. This is ideal for large projects that move a lot.
    # For any third-party modules, set the flow before making the function call.
    logger_flowchart = logging.getLogger("flowchart")
    logger_flowchart.debug(f"Flowchart --> Function: {get_function_name()}")

    type_check(value=model, required_type=ShapeModel, tb_remove_name="fit_coefficients")
    type_check(value=face, required_type=DepthMap, tb_remove_name="fit_coefficients")

    logger.debug(
        "Passing parameters:\n"
        f"  - model (ShapeModel):\n        - k={model.k}\n"
        f"  - face (DepthMap):\n        - {face.n_valid} valid cells\n"
    )

    require_same_grid("fit_coefficients", model.grid, face)
    values = face.cells[model.support] - model.mean
    observed = ~np.isnan(values)
    if not np.any(observed):
        exc_args = {
            "main_message": "The face does not overlap the model support.",
            "custom_type": InsufficientData,
            "returned_result": f"{face.n_valid} valid cells",
        }
        raise InsufficientData(FCustomException(message_args=exc_args, tb_remove_name="fit_coefficients"))

    if np.all(observed):
        projection = model.basis @ values
    else:
        projection = np.linalg.lstsq(model.basis[:, observed].T, values[observed], rcond=None)[0]
    coefficients = CoefficientVector(projection / model.sigmas)
    logger.debug(f"Returning value(s):\n  - Return = {summarize_value(coefficients.values)}")
    return coefficients


def reconstruct(model: ShapeModel, c: Union[CoefficientVector, Sequence[float], np.ndarray]) -> DepthMap:
    """
    Regenerates a face from coefficients: mean + sum(c_i * sigma_i * component_i).

    Cells outside the model support are HOLE.

    Raises:
        LengthMismatch:
        \t\\- The coefficient vector length does not match the model.
    """
    logger = logging.getLogger(__name__)
    logger.debug(f"=" * 20 + get_function_name() + "=" * 20)
    # Custom flowchart tracking. This is ideal for large projects that move a lot.
    # For any third-party modules, set the flow before making the function call.
    logger_flowchart = logging.getLogger("flowchart")
    logger_flowchart.debug(f"Flowchart --> Function: {get_function_name()}")

    type_check(value=model, required_type=ShapeModel, tb_remove_name="reconstruct")
    if not isinstance(c, CoefficientVector):
        c = CoefficientVector(np.asarray(c, dtype=np.float64))

    logger.debug(
        "Passing parameters:\n"
        f"  - model (ShapeModel):\n        - k={model.k}\n"
        f"  - c (CoefficientVector):\n        - {summarize_value(c.values)}\n"
    )

    if len(c) != model.k:
        exc_args = {
            "main_message": "The coefficient vector length does not match the model.",
            "custom_type": LengthMismatch,
            "expected_result": model.k,
            "returned_result": len(c),
        }
        raise LengthMismatch(FCustomException(message_args=exc_args, tb_remove_name="reconstruct"))

    face = model._to_depth_map(model.mean + (c.values * model.sigmas) @ model.basis)
    logger.debug(f"Returning value(s):\n  - Return = DepthMap with {face.n_valid} valid cells")
    return face


def explained_variance(model: ShapeModel) -> np.ndarray:
    """Fraction of the total training variance carried by each component."""
    return model.sigmas**2 / model.total_variance


def reconstruction_rms(model: ShapeModel, face: DepthMap) -> float:
    """RMS between a face and its model reconstruction over the cells valid in both."""
    return depth_rms(face, reconstruct(model, fit_coefficients(model, face)))


def save_model(model: ShapeModel, path: str) -> None:
    """Saves a shape model to a versioned .npz container."""
    type_check(value=model, required_type=ShapeModel, tb_remove_name="save_model")
    grid = model.grid
    write_model_file(
        path,
        MODEL_KIND,
        MODEL_FORMAT_VERSION,
        {
            "grid": np.array(
                [grid.width, grid.height, grid.origin_x, grid.origin_y, grid.spacing_x, grid.spacing_y], dtype=np.float64
            ),
            "support": model.support,
            "mean": model.mean,
            "basis": model.basis,
            "sigmas": model.sigmas,
            "stats": np.array([model.total_variance, model.n_training], dtype=np.float64),
        },
    )


def load_model(path: str) -> ShapeModel:
    """
    Loads a shape model saved by save_model.

    Raises:
        ModelFormatFailure:
        \t\\- The container is unreadable, of another kind or version, or inconsistent.
    """
    arrays = read_model_file(path, MODEL_KIND, MODEL_FORMAT_VERSION, ("grid", "support", "mean", "basis", "sigmas", "stats"))
    width, height, origin_x, origin_y, spacing_x, spacing_y = arrays["grid"].tolist()
    grid = GridSpec(int(width), int(height), origin_x, origin_y, spacing_x, spacing_y)
    support = arrays["support"].astype(bool)
    basis = arrays["basis"]
    if (
        support.shape != grid.shape
        or basis.ndim != 2
        or basis.shape[1] != int(support.sum())
        or arrays["mean"].shape != (basis.shape[1],)
        or arrays["sigmas"].shape != (basis.shape[0],)
    ):
        exc_args = {
            "main_message": "The shape model arrays are inconsistent.",
            "custom_type": ModelFormatFailure,
            "expected_result": f"support {grid.shape}, basis (K, support cells)",
            "returned_result": f"support {support.shape}, basis {basis.shape}",
        }
        raise ModelFormatFailure(FCustomException(message_args=exc_args, tb_remove_name="load_model"))
    total_variance, n_training = arrays["stats"].tolist()
    return ShapeModel(grid, support, arrays["mean"], basis, arrays["sigmas"], float(total_variance), int(n_training))
