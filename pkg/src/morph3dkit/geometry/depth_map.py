"""
Regular lateral grids of depth values in the intrinsic frame.

Cell (row, col) covers x in [origin_x + col·spacing_x, origin_x + (col+1)·spacing_x)
and the same for y with rows. Rows run toward +y. HOLE cells are NaN.
"""
# Built-in/Generic Imports
from dataclasses import dataclass, asdict
from typing import Tuple, Union

# Libraries
import numpy as np

# Exceptions
from fexception import FCustomException
from .exceptions import InvalidGeometry, GridMismatch

__author__ = "IncognitoCoding"
__copyright__ = "Copyright 2022, depth_map"
__credits__ = ["IncognitoCoding"]
__license__ = "MIT"
__version__ = "0.4"
__maintainer__ = "IncognitoCoding"
__status__ = "Production"

HOLE = np.nan


@dataclass(frozen=True)
class GridSpec:
    """Grid geometry in millimeters."""

    width: int = 120
    height: int = 120
    origin_x: float = -90.0
    origin_y: float = -70.0
    spacing_x: float = 1.5
    spacing_y: float = 1.5

    def __post_init__(self) -> None:
        if int(self.width) < 1 or int(self.height) < 1 or self.spacing_x <= 0 or self.spacing_y <= 0:
            exc_args = {
                "main_message": "The grid specification is invalid.",
                "custom_type": InvalidGeometry,
                "expected_result": "width, height >= 1 and spacing > 0",
                "returned_result": asdict(self),
            }
            raise InvalidGeometry(FCustomException(message_args=exc_args, tb_remove_name="__post_init__"))
        object.__setattr__(self, "width", int(self.width))
        object.__setattr__(self, "height", int(self.height))
        for name in ("origin_x", "origin_y", "spacing_x", "spacing_y"):
            object.__setattr__(self, name, float(getattr(self, name)))

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.height, self.width)

    def x_centers(self) -> np.ndarray:
        return self.origin_x + (np.arange(self.width) + 0.5) * self.spacing_x

    def y_centers(self) -> np.ndarray:
        return self.origin_y + (np.arange(self.height) + 0.5) * self.spacing_y

    def cell_of(self, x: Union[float, np.ndarray], y: Union[float, np.ndarray]) -> Tuple[np.ndarray, np.ndarray]:
        """Returns (row, col) indices of the cells containing (x, y). Out-of-grid points get indices outside range."""
        col = np.floor((np.asarray(x, dtype=np.float64) - self.origin_x) / self.spacing_x).astype(np.int64)
        row = np.floor((np.asarray(y, dtype=np.float64) - self.origin_y) / self.spacing_y).astype(np.int64)
        return row, col

    def center_of(self, row: Union[int, np.ndarray], col: Union[int, np.ndarray]) -> Tuple[np.ndarray, np.ndarray]:
        """Returns (x, y) of cell centers."""
        x = self.origin_x + (np.asarray(col, dtype=np.float64) + 0.5) * self.spacing_x
        y = self.origin_y + (np.asarray(row, dtype=np.float64) + 0.5) * self.spacing_y
        return x, y

    def is_x_symmetric(self) -> bool:
        return bool(np.isclose(self.origin_x + self.width * self.spacing_x * 0.5, 0.0, atol=1e-9))

    def to_dict(self) -> dict:
        return asdict(self)


DEFAULT_GRID = GridSpec()


@dataclass(frozen=True, eq=False)
class DepthMap:
    """
    Immutable depth map.

    Attributes:
        grid (GridSpec):
        \t\\- The grid geometry.
        cells (np.ndarray):
        \t\\- (height, width) float64 depth in millimeters, NaN for HOLE.
    """

    grid: GridSpec
    cells: np.ndarray

    def __post_init__(self) -> None:
        cells = np.array(self.cells, dtype=np.float64)
        if cells.shape != self.grid.shape:
            exc_args = {
                "main_message": "The depth cells do not match the grid dimensions.",
                "custom_type": InvalidGeometry,
                "expected_result": self.grid.shape,
                "returned_result": cells.shape,
            }
            raise InvalidGeometry(FCustomException(message_args=exc_args, tb_remove_name="__post_init__"))
        if np.any(np.isinf(cells)):
            exc_args = {
                "main_message": "The depth map contains infinite cells.",
                "custom_type": InvalidGeometry,
                "expected_result": "finite depth or NaN (HOLE)",
                "returned_result": int(np.count_nonzero(np.isinf(cells))),
            }
            raise InvalidGeometry(FCustomException(message_args=exc_args, tb_remove_name="__post_init__"))
        cells.setflags(write=False)
        object.__setattr__(self, "cells", cells)

    @classmethod
    def empty(cls, grid: GridSpec) -> "DepthMap":
        return cls(grid, np.full(grid.shape, HOLE))

    @property
    def valid(self) -> np.ndarray:
        return ~np.isnan(self.cells)

    @property
    def n_valid(self) -> int:
        return int(np.count_nonzero(self.valid))

    def with_cells(self, cells: np.ndarray) -> "DepthMap":
        return DepthMap(self.grid, cells)

    def mirrored_x(self) -> "DepthMap":
        """Reflects the map across x = 0. Needs a grid symmetric about x = 0."""
        if not self.grid.is_x_symmetric():
            exc_args = {
                "main_message": "The depth map grid is not symmetric about x = 0.",
                "custom_type": GridMismatch,
                "expected_result": "origin_x == -width * spacing_x / 2",
                "returned_result": self.grid.to_dict(),
            }
            raise GridMismatch(FCustomException(message_args=exc_args, tb_remove_name="mirrored_x"))
        return DepthMap(self.grid, self.cells[:, ::-1])

    def equals(self, other: "DepthMap") -> bool:
        """Exact cellwise equality, HOLE matching HOLE."""
        return bool(self.grid == other.grid and np.array_equal(self.cells, other.cells, equal_nan=True))


def require_same_grid(tb_remove_name: str, *maps) -> GridSpec:
    """
    Checks that every depth map (or object with a grid attribute) shares one grid.

    Raises:
        GridMismatch:
        \t\\- The depth maps do not share one grid specification.
    """
    grids = [m if isinstance(m, GridSpec) else m.grid for m in maps]
    for grid in grids[1:]:
        if grid != grids[0]:
            exc_args = {
                "main_message": "The depth maps do not share one grid specification.",
                "custom_type": GridMismatch,
                "expected_result": grids[0].to_dict(),
                "returned_result": grid.to_dict(),
                "suggested_resolution": "Rasterize every face on the same grid before combining them.",
            }
            raise GridMismatch(FCustomException(message_args=exc_args, tb_remove_name=tb_remove_name))
    return grids[0]


def depth_rms(a: DepthMap, b: DepthMap) -> float:
    """RMS depth difference over cells valid in both maps. NaN when they share no cell."""
    require_same_grid("depth_rms", a, b)
    diff = a.cells - b.cells
    diff = diff[~np.isnan(diff)]
    if diff.size == 0:
        return float("nan")
    return float(np.sqrt(np.mean(diff**2)))
