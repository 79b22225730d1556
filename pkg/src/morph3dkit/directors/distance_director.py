"""
This module is designed to compare faces with local shape descriptors and a cosine distance.

A face descriptor is the concatenation of per-patch soft histograms of the
shape index and of the lateral surface normal components over a fixed patch
tiling of the depth map. Scores lie in [0, 2]; lower is more alike.
"""
# Built-in/Generic Imports
import math
import logging
from dataclasses import dataclass
from typing import Tuple

# Libraries
import numpy as np
from scipy.ndimage import gaussian_filter
from fchecker.type import type_check

# Local Functions
from ..helpers.py_helper import get_function_name
from ..geometry.depth_map import DepthMap, require_same_grid
from .score_director import Polarity, ScoreRecord

# Exceptions
from fexception import FCustomException
from .exceptions import InvalidConfig

__author__ = "IncognitoCoding"
__copyright__ = "Copyright 2022, distance_director"
__credits__ = ["IncognitoCoding"]
__license__ = "MIT"
__version__ = "1.2"
__maintainer__ = "IncognitoCoding"
__status__ = "Production"

MATCHER_ID = "distance"


class DegenerateDescriptor(Exception):
    """Exception raised when a face yields no usable descriptor."""

    __module__ = "builtins"
    pass


@dataclass(frozen=True)
class DistanceMatcherConfig:
    """
    Descriptor parameters.

    Attributes:
        smoothing_sigma_mm (float):
        \t\\- Gaussian smoothing before differentiation.
        window (Tuple[float, float, float, float]):
        \t\\- [x_min, y_min, x_max, y_max] area tiled by the patches.
        patches (Tuple[int, int]):
        \t\\- Patch columns and rows.
        bins (int):
        \t\\- Histogram bins per quantity.
    """

    smoothing_sigma_mm: float = 4.5
    window: Tuple[float, float, float, float] = (-63.0, -63.0, 63.0, 93.0)
    patches: Tuple[int, int] = (6, 6)
    bins: int = 8

    def __post_init__(self) -> None:
        window = tuple(float(v) for v in self.window)
        patches = tuple(int(v) for v in self.patches)
        if (
            len(window) != 4
            or window[0] >= window[2]
            or window[1] >= window[3]
            or len(patches) != 2
            or min(patches) < 1
            or self.bins < 2
            or self.smoothing_sigma_mm < 0
        ):
            exc_args = {
                "main_message": "The distance matcher configuration is invalid.",
                "custom_type": InvalidConfig,
                "expected_result": "x_min < x_max, y_min < y_max, patches >= 1, bins >= 2, sigma >= 0",
                "returned_result": self,
            }
            raise InvalidConfig(FCustomException(message_args=exc_args, tb_remove_name="__post_init__"))
        object.__setattr__(self, "window", window)
        object.__setattr__(self, "patches", patches)


def _smooth(depth_map: DepthMap, sigma_mm: float) -> np.ndarray:
    """Normalized-convolution Gaussian smoothing. HOLE cells stay HOLE."""
    valid = depth_map.valid
    if sigma_mm == 0:
        return depth_map.cells.copy()
    sigma = (sigma_mm / depth_map.grid.spacing_y, sigma_mm / depth_map.grid.spacing_x)
    numerator = gaussian_filter(np.where(valid, depth_map.cells, 0.0), sigma, mode="constant")
    weight = gaussian_filter(valid.astype(np.float64), sigma, mode="constant")
    with np.errstate(invalid="ignore", divide="ignore"):
        smoothed = numerator / weight
    smoothed[~valid] = np.nan
    return smoothed


def surface_quantities(depth_map: DepthMap, config: DistanceMatcherConfig) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Per-cell shape index in [0, 1] and unit normal x/y components.

    Principal curvatures are approximated by the eigenvalues of the depth
    Hessian. Cells next to holes come out NaN.
    """
    z = _smooth(depth_map, config.smoothing_sigma_mm)
    spacing = (depth_map.grid.spacing_y, depth_map.grid.spacing_x)
    if min(z.shape) < 2:
        nan = np.full(z.shape, np.nan)
        return nan, nan.copy(), nan.copy()
    gy, gx = np.gradient(z, *spacing)
    gxy, gxx = np.gradient(gx, *spacing)
    gyy, gyx = np.gradient(gy, *spacing)
    mixed = 0.5 * (gxy + gyx)

    norm = np.sqrt(1.0 + gx**2 + gy**2)
    nx = -gx / norm
    ny = -gy / norm

    half_sum = 0.5 * (gxx + gyy)
    half_gap = np.sqrt((0.5 * (gxx - gyy)) ** 2 + mixed**2)
    k1 = half_sum + half_gap
    k2 = half_sum - half_gap
    shape_index = 0.5 - np.arctan2(k1 + k2, k1 - k2) / math.pi
    return shape_index, nx, ny


def _soft_bins(values: np.ndarray, lo: float, hi: float, bins: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Linear interpolation between bin centers: (lower bin, upper bin, upper weight)."""
    position = (np.clip(values, lo, hi) - lo) / (hi - lo) * bins - 0.5
    lower = np.floor(position)
    upper_weight = position - lower
    lower = lower.astype(np.int64)
    upper = np.clip(lower + 1, 0, bins - 1)
    lower = np.clip(lower, 0, bins - 1)
    return lower, upper, upper_weight


def distance_descriptor(depth_map: DepthMap, config: DistanceMatcherConfig = DistanceMatcherConfig()) -> np.ndarray:
    """
    Builds the l2-normalized descriptor of a face.

    Each patch histogram is divided by the patch's usable cell count and
    centered by subtracting 1/bins. Patches without a usable cell take the
    mean histogram of the other patches.

    Args:
        depth_map (DepthMap):
        \t\\- A registered face.
        config (DistanceMatcherConfig, optional):
        \t\\- Descriptor parameters.

    Raises:
        FTypeError (fexception):
        \t\\- The object value '{depth_map}' is not an instance of the required class(es) or subclass(es).
        DegenerateDescriptor:
        \t\\- No patch holds a usable cell.
        DegenerateDescriptor:
        \t\\- The descriptor has zero length.

    Returns:
        np.ndarray:
        \t\\- (patches * 3 * bins,) unit vector.
    """
    logger = logging.getLogger(__name__)
    logger.debug(f"=" * 20 + get_function_name() + "=" * 20)
    # Custom flowchart tracking. This is ideal for large projects that move a lot.
    # For any third-party modules, set the flow before making the function call.
    logger_flowchart = logging.getLogger("flowchart")
    logger_flowchart.debug(f"Flowchart --> Function: {get_function_name()}")

    type_check(value=depth_map, required_type=DepthMap, tb_remove_name="distance_descriptor")
    type_check(value=config, required_type=DistanceMatcherConfig, tb_remove_name="distance_descriptor")

    logger.debug(
        "Passing parameters:\n"
        f"  - depth_map (DepthMap):\n        - {depth_map.n_valid} valid cells\n"
        f"  - config (DistanceMatcherConfig):\n        - {config}\n"
    )

    shape_index, nx, ny = surface_quantities(depth_map, config)
    columns, rows = config.patches
    bins = config.bins
    n_patches = columns * rows
    x_min, y_min, x_max, y_max = config.window

    x, y = np.meshgrid(depth_map.grid.x_centers(), depth_map.grid.y_centers())
    col = np.floor((x - x_min) / (x_max - x_min) * columns).astype(np.int64)
    row = np.floor((y - y_min) / (y_max - y_min) * rows).astype(np.int64)
    usable = (
        (col >= 0) & (col < columns) & (row >= 0) & (row < rows)
        & np.isfinite(shape_index) & np.isfinite(nx) & np.isfinite(ny)
    )
    patch = (row * columns + col)[usable]
    counts = np.bincount(patch, minlength=n_patches).astype(np.float64)

    histograms = np.zeros((n_patches, 3, bins))
    for channel, (values, lo, hi) in enumerate(((shape_index, 0.0, 1.0), (nx, -1.0, 1.0), (ny, -1.0, 1.0))):
        lower, upper, weight = _soft_bins(values[usable], lo, hi, bins)
        flat = np.bincount(patch * bins + lower, weights=1.0 - weight, minlength=n_patches * bins)
        flat += np.bincount(patch * bins + upper, weights=weight, minlength=n_patches * bins)
        histograms[:, channel, :] = flat.reshape(n_patches, bins)

    filled = counts > 0
    if not np.any(filled):
        exc_args = {
            "main_message": "No patch holds a usable cell.",
            "custom_type": DegenerateDescriptor,
            "expected_result": f"usable cells inside the window {config.window}",
            "returned_result": f"{depth_map.n_valid} valid cells",
        }
        raise DegenerateDescriptor(FCustomException(message_args=exc_args, tb_remove_name="distance_descriptor"))
    histograms[filled] = histograms[filled] / counts[filled, None, None] - 1.0 / bins
    histograms[~filled] = histograms[filled].mean(axis=0)
    if np.any(~filled):
        logger.debug(f"{int(np.count_nonzero(~filled))} empty patch(es) imputed with the mean patch histogram")

    descriptor = histograms.reshape(-1)
    length = float(np.linalg.norm(descriptor))
    if length == 0.0 or not math.isfinite(length):
        exc_args = {
            "main_message": "The descriptor has zero length.",
            "custom_type": DegenerateDescriptor,
            "expected_result": "a non-zero descriptor",
            "returned_result": length,
        }
        raise DegenerateDescriptor(FCustomException(message_args=exc_args, tb_remove_name="distance_descriptor"))
    descriptor = descriptor / length
    logger.debug(f"Returning value(s):\n  - Return = descriptor of length {len(descriptor)}")
    return descriptor


def cosine_distance(u: np.ndarray, v: np.ndarray) -> float:
    """1 - cos(u, v), clipped to [0, 2]. Inputs are unit vectors."""
    return float(np.clip(1.0 - float(np.dot(u, v)), 0.0, 2.0))


def score_distance(
    probe: DepthMap,
    gallery: DepthMap,
    config: DistanceMatcherConfig = DistanceMatcherConfig(),
    probe_id: str = "probe",
    gallery_id: str = "gallery",
) -> ScoreRecord:
    """
    Compares two faces by the cosine distance of their descriptors.

    Raises:
        GridMismatch:
        \t\\- The faces are not on one grid.
        DegenerateDescriptor:
        \t\\- A face yields no usable descriptor.
    """
    logger = logging.getLogger(__name__)
    logger.debug(f"=" * 20 + get_function_name() + "=" * 20)
    # Custom flowchart tracking. This is ideal for large projects that move a lot.
    # For any third-party modules, set the flow before making the function call.
    logger_flowchart = logging.getLogger("flowchart")
    logger_flowchart.debug(f"Flowchart --> Function: {get_function_name()}")

    type_check(value=probe, required_type=DepthMap, tb_remove_name="score_distance")
    type_check(value=gallery, required_type=DepthMap, tb_remove_name="score_distance")

    logger.debug(
        "Passing parameters:\n"
        f"  - probe_id (str):\n        - {probe_id}\n"
        f"  - gallery_id (str):\n        - {gallery_id}\n"
    )

    require_same_grid("score_distance", probe, gallery)
    score = cosine_distance(distance_descriptor(probe, config), distance_descriptor(gallery, config))
    record = ScoreRecord(probe_id, gallery_id, score, Polarity.DISTANCE, MATCHER_ID)
    logger.debug(f"Returning value(s):\n  - Return = {record}")
    return record


def score_descriptor_pairs(descriptors_a: np.ndarray, descriptors_b: np.ndarray) -> np.ndarray:
    """Cosine distances of aligned descriptor rows."""
    return np.clip(1.0 - np.einsum("pi,pi->p", descriptors_a, descriptors_b), 0.0, 2.0)
