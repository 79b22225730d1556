"""
This module is designed to generate 3D face morphs from registered depth maps.

Two generators are provided. Depth averaging blends two registered faces cell
by cell. Coefficient averaging blends the shape model coefficients of two
faces and regenerates the morph from the model.
"""
# Built-in/Generic Imports
import math
import logging
from enum import Enum
from dataclasses import dataclass
from typing import Optional, Tuple, Union

# Libraries
import numpy as np
from fchecker.type import type_check

# Local Functions
from ..helpers.py_helper import get_function_name
from ..geometry.mesh import TriMesh, grid_triangulation
from ..geometry.depth_map import DepthMap, HOLE, require_same_grid
from .shape_model_director import ShapeModel, CoefficientVector, fit_coefficients, reconstruct

# Exceptions
from fexception import FCustomException

__author__ = "IncognitoCoding"
__copyright__ = "Copyright 2022, morph_director"
__credits__ = ["IncognitoCoding"]
__license__ = "MIT"
__version__ = "1.2"
__maintainer__ = "IncognitoCoding"
__status__ = "Production"


class InvalidMorphSpec(Exception):
    """Exception raised for an invalid morph specification."""

    __module__ = "builtins"
    pass


class DegenerateSurface(Exception):
    """Exception raised when a depth map has no triangle to mesh."""

    __module__ = "builtins"
    pass


class MorphMethod(Enum):
    DEPTH_AVERAGE = "depth_average"
    COEFFICIENT_AVERAGE = "coefficient_average"


class HolePolicy(Enum):
    UNION = "union"
    INTERSECT_FILL = "intersect_fill"


# Short names accepted from the command line and configs.
METHOD_ALIASES = {
    "depth": MorphMethod.DEPTH_AVERAGE,
    "coefficient": MorphMethod.COEFFICIENT_AVERAGE,
}


def _as_enum(value, enum_type, aliases: Optional[dict] = None):
    if isinstance(value, enum_type):
        return value
    if aliases and value in aliases:
        return aliases[value]
    try:
        return enum_type(value)
    except ValueError:
        exc_args = {
            "main_message": f"The value is not a valid {enum_type.__name__}.",
            "custom_type": InvalidMorphSpec,
            "expected_result": [member.value for member in enum_type] + sorted(aliases or {}),
            "returned_result": value,
        }
        raise InvalidMorphSpec(FCustomException(message_args=exc_args, tb_remove_name="__post_init__"))


@dataclass(frozen=True)
class MorphSpec:
    """
    How a morph is built.

    Attributes:
        method (MorphMethod):
        \t\\- DEPTH_AVERAGE or COEFFICIENT_AVERAGE. Strings are converted.
        alpha (float):
        \t\\- Weight of subject A in [0, 1]. Defaults to 0.5.
        hole_policy (HolePolicy):
        \t\\- UNION (HOLE where any contributing side is HOLE) or INTERSECT_FILL (copy the valid side).
        subject_a (str, optional):
        \t\\- Contributing subject A.
        subject_b (str, optional):
        \t\\- Contributing subject B.
    """

    method: Union[MorphMethod, str] = MorphMethod.DEPTH_AVERAGE
    alpha: float = 0.5
    hole_policy: Union[HolePolicy, str] = HolePolicy.UNION
    subject_a: Optional[str] = None
    subject_b: Optional[str] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "method", _as_enum(self.method, MorphMethod, METHOD_ALIASES))
        object.__setattr__(self, "hole_policy", _as_enum(self.hole_policy, HolePolicy))
        if isinstance(self.alpha, bool) or not isinstance(self.alpha, (int, float)) or not (0.0 <= self.alpha <= 1.0):
            exc_args = {
                "main_message": "The morph weight alpha is outside [0, 1].",
                "custom_type": InvalidMorphSpec,
                "expected_result": "0 <= alpha <= 1",
                "returned_result": self.alpha,
            }
            raise InvalidMorphSpec(FCustomException(message_args=exc_args, tb_remove_name="__post_init__"))
        object.__setattr__(self, "alpha", float(self.alpha))


def _require_method(spec: MorphSpec, method: MorphMethod, tb_remove_name: str) -> None:
    if spec.method is not method:
        exc_args = {
            "main_message": "The morph specification names a different method.",
            "custom_type": InvalidMorphSpec,
            "expected_result": method.value,
            "returned_result": spec.method.value,
        }
        raise InvalidMorphSpec(FCustomException(message_args=exc_args, tb_remove_name=tb_remove_name))


def depth_average(a: DepthMap, b: DepthMap, spec: MorphSpec) -> DepthMap:
    """
    Blends two registered depth maps: z = alpha * z_a + (1 - alpha) * z_b.

    Only sides with a nonzero weight contribute, so alpha = 1 returns a and
    alpha = 0 returns b exactly, holes included. Where one contributing side is
    HOLE, UNION leaves the cell HOLE and INTERSECT_FILL copies the valid side.

    Args:
        a (DepthMap):
        \t\\- Subject A.
        b (DepthMap):
        \t\\- Subject B.
        spec (MorphSpec):
        \t\\- DEPTH_AVERAGE specification.

    Raises:
        FTypeError (fexception):
        \t\\- The object value '{a}' is not an instance of the required class(es) or subclass(es).
        GridMismatch:
        \t\\- The depth maps do not share one grid specification.
        InvalidMorphSpec:
        \t\\- The morph specification names a different method.

    Returns:
        DepthMap:
        \t\\- The morph.
    """
    logger = logging.getLogger(__name__)
    logger.debug(f"=" * 20 + get_function_name() + "=" * 20)
    # Custom flowchart tracking. This is ideal for large projects that move a lot.
    # For any third-party modules, set the flow before making the function call.
    logger_flowchart = logging.getLogger("flowchart")
    logger_flowchart.debug(f"Flowchart --> Function: {get_function_name()}")

    type_check(value=a, required_type=DepthMap, tb_remove_name="depth_average")
    type_check(value=b, required_type=DepthMap, tb_remove_name="depth_average")
    type_check(value=spec, required_type=MorphSpec, tb_remove_name="depth_average")

    logger.debug(
        "Passing parameters:\n"
        f"  - a (DepthMap):\n        - {a.n_valid} valid cells\n"
        f"  - b (DepthMap):\n        - {b.n_valid} valid cells\n"
        f"  - spec (MorphSpec):\n        - {spec}\n"
    )

    require_same_grid("depth_average", a, b)
    _require_method(spec, MorphMethod.DEPTH_AVERAGE, "depth_average")

    alpha = spec.alpha
    if alpha == 1.0:
        return a.with_cells(a.cells)
    if alpha == 0.0:
        return b.with_cells(b.cells)

    valid_a, valid_b = a.valid, b.valid
    both = valid_a & valid_b
    cells = np.full(a.grid.shape, HOLE)
    cells[both] = alpha * a.cells[both] + (1.0 - alpha) * b.cells[both]
    if spec.hole_policy is HolePolicy.INTERSECT_FILL:
        only_a = valid_a & ~valid_b
        only_b = valid_b & ~valid_a
        cells[only_a] = a.cells[only_a]
        cells[only_b] = b.cells[only_b]

    morph = DepthMap(a.grid, cells)
    logger.debug(f"Returning value(s):\n  - Return = DepthMap with {morph.n_valid} valid cells")
    return morph


def coefficient_average(
    model: ShapeModel, a: DepthMap, b: DepthMap, spec: MorphSpec
) -> Tuple[DepthMap, CoefficientVector]:
    """
    Blends the model coefficients of two faces and regenerates the morph.

    c_m = alpha * fit(a) + (1 - alpha) * fit(b). The morph is reconstruct(c_m),
    so even alpha = 1 returns the model's projection of a, not a itself.

    Args:
        model (ShapeModel):
        \t\\- The shape model.
        a (DepthMap):
        \t\\- Subject A.
        b (DepthMap):
        \t\\- Subject B.
        spec (MorphSpec):
        \t\\- COEFFICIENT_AVERAGE specification.

    Raises:
        FTypeError (fexception):
        \t\\- The object value '{model}' is not an instance of the required class(es) or subclass(es).
        GridMismatch:
        \t\\- A face is not on the model grid.
        InvalidMorphSpec:
        \t\\- The morph specification names a different method.

    Returns:
        Tuple[DepthMap, CoefficientVector]:
        \t\\- The morph and its coefficients.
    """
    logger = logging.getLogger(__name__)
    logger.debug(f"=" * 20 + get_function_name() + "=" * 20)
    # Custom flowchart tracking. This is ideal for large projects that move a lot.
    # For any third-party modules, set the flow before making the function call.
    logger_flowchart = logging.getLogger("flowchart")
    logger_flowchart.debug(f"Flowchart --> Function: {get_function_name()}")

    type_check(value=model, required_type=ShapeModel, tb_remove_name="coefficient_average")
    type_check(value=a, required_type=DepthMap, tb_remove_name="coefficient_average")
    type_check(value=b, required_type=DepthMap, tb_remove_name="coefficient_average")
    type_check(value=spec, required_type=MorphSpec, tb_remove_name="coefficient_average")

    logger.debug(
        "Passing parameters:\n"
        f"  - model (ShapeModel):\n        - k={model.k}\n"
        f"  - spec (MorphSpec):\n        - {spec}\n"
    )

    require_same_grid("coefficient_average", model.grid, a, b)
    _require_method(spec, MorphMethod.COEFFICIENT_AVERAGE, "coefficient_average")

    coefficients = fit_coefficients(model, a).blend(fit_coefficients(model, b), spec.alpha)
    morph = reconstruct(model, coefficients)
    logger.debug(f"Returning value(s):\n  - Return = DepthMap with {morph.n_valid} valid cells")
    return morph, coefficients


def morph_to_mesh(d: DepthMap) -> TriMesh:
    """
    Meshes a depth map: one vertex per valid cell center, grid-triangulated.

    Raises:
        FTypeError (fexception):
        \t\\- The object value '{d}' is not an instance of the required class(es) or subclass(es).
        DegenerateSurface:
        \t\\- The depth map has no triangle of valid cells.
    """
    logger = logging.getLogger(__name__)
    logger.debug(f"=" * 20 + get_function_name() + "=" * 20)
    # Custom flowchart tracking. This is ideal for large projects that move a lot.
    # For any third-party modules, set the flow before making the function call.
    logger_flowchart = logging.getLogger("flowchart")
    logger_flowchart.debug(f"Flowchart --> Function: {get_function_name()}")

    type_check(value=d, required_type=DepthMap, tb_remove_name="morph_to_mesh")

    logger.debug("Passing parameters:\n" f"  - d (DepthMap):\n        - {d.n_valid} valid cells\n")

    valid = d.valid
    faces = grid_triangulation(valid)
    if len(faces) == 0:
        exc_args = {
            "main_message": "The depth map has no triangle of valid cells.",
            "custom_type": DegenerateSurface,
            "expected_result": "at least 3 valid cells in one 2x2 block",
            "returned_result": f"{d.n_valid} valid cells",
        }
        raise DegenerateSurface(FCustomException(message_args=exc_args, tb_remove_name="morph_to_mesh"))

    x, y = np.meshgrid(d.grid.x_centers(), d.grid.y_centers())
    z = np.where(valid, d.cells, 0.0)
    vertices = np.stack([x.ravel(), y.ravel(), z.ravel()], axis=1)
    mesh = TriMesh(vertices, faces, valid.ravel()).subset(valid.ravel())
    logger.debug(f"Returning value(s):\n  - Return = {mesh.n_vertices} vertices, {mesh.n_faces} faces")
    return mesh


def boundary_discontinuity(d: DepthMap, region_mask: np.ndarray) -> float:
    """
    Largest depth jump between 4-neighbor cells across the rim of a region.

    Only neighbor pairs with one cell inside the region, one outside and both
    valid are measured. Returns 0.0 when there is no such pair.
    """
    region = np.asarray(region_mask, dtype=bool)
    if region.shape != d.grid.shape:
        exc_args = {
            "main_message": "The region mask does not match the grid dimensions.",
            "custom_type": InvalidMorphSpec,
            "expected_result": d.grid.shape,
            "returned_result": region.shape,
        }
        raise InvalidMorphSpec(FCustomException(message_args=exc_args, tb_remove_name="boundary_discontinuity"))
    largest = 0.0
    cells = d.cells
    for axis in (0, 1):
        first = [slice(None), slice(None)]
        second = [slice(None), slice(None)]
        first[axis] = slice(None, -1)
        second[axis] = slice(1, None)
        first, second = tuple(first), tuple(second)
        rim = region[first] != region[second]
        jump = np.abs(cells[first] - cells[second])[rim]
        jump = jump[~np.isnan(jump)]
        if jump.size:
            largest = max(largest, float(jump.max()))
    return largest if math.isfinite(largest) else 0.0
