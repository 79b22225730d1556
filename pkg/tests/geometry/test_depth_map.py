# Built-in/Generic Imports
import pytest

# Libraries
import numpy as np

# Local Functions
from morph3dkit import HOLE, GridSpec, DepthMap, DEFAULT_GRID, depth_rms, require_same_grid


__author__ = "IncognitoCoding"
__copyright__ = "Copyright 2022, test_depth_map"
__credits__ = ["IncognitoCoding"]
__license__ = "MIT"
__version__ = "0.2"
__maintainer__ = "IncognitoCoding"
__status__ = "Production"


# ############################################################
# ######Section Test Part 1 (Successful Value Checking)#######
# ############################################################


def test_1_grid_spec():
    """Tests the default grid covers the face region symmetrically in x."""
    assert DEFAULT_GRID.shape == (120, 120)
    assert DEFAULT_GRID.is_x_symmetric()
    assert np.isclose(DEFAULT_GRID.x_centers()[0], -89.25)


def test_1_1_grid_spec():
    """Tests cell_of and center_of agree."""
    grid = GridSpec(width=10, height=8, origin_x=-5.0, origin_y=-4.0, spacing_x=1.0, spacing_y=1.0)
    x, y = grid.center_of(3, 7)
    row, col = grid.cell_of(x, y)
    assert (int(row), int(col)) == (3, 7)


def test_1_depth_map():
    """Tests HOLE cells are not valid."""
    grid = GridSpec(width=4, height=2, origin_x=-2.0, origin_y=-1.0, spacing_x=1.0, spacing_y=1.0)
    cells = np.arange(8, dtype=float).reshape(2, 4)
    cells[0, 1] = HOLE
    depth_map = DepthMap(grid, cells)
    assert depth_map.n_valid == 7
    assert not depth_map.valid[0, 1]


def test_1_1_depth_map():
    """Tests mirroring twice returns the same map and equality treats HOLE as equal."""
    grid = GridSpec(width=4, height=2, origin_x=-2.0, origin_y=-1.0, spacing_x=1.0, spacing_y=1.0)
    cells = np.arange(8, dtype=float).reshape(2, 4)
    cells[1, 0] = HOLE
    depth_map = DepthMap(grid, cells)
    mirrored = depth_map.mirrored_x()
    assert np.isnan(mirrored.cells[1, 3])
    assert mirrored.mirrored_x().equals(depth_map)


def test_1_depth_rms():
    """Tests the RMS over cells valid in both maps."""
    grid = GridSpec(width=2, height=1, origin_x=-1.0, origin_y=0.0, spacing_x=1.0, spacing_y=1.0)
    a = DepthMap(grid, np.array([[1.0, 5.0]]))
    b = DepthMap(grid, np.array([[4.0, HOLE]]))
    assert depth_rms(a, b) == pytest.approx(3.0)


def test_1_1_depth_rms():
    """Tests maps sharing no valid cell give NaN."""
    grid = GridSpec(width=2, height=1, origin_x=-1.0, origin_y=0.0, spacing_x=1.0, spacing_y=1.0)
    a = DepthMap(grid, np.array([[1.0, HOLE]]))
    b = DepthMap(grid, np.array([[HOLE, 2.0]]))
    assert np.isnan(depth_rms(a, b))


# ############################################################
# ######Section Test Part 2 (Error/Catch Value Checking)######
# ############################################################


def test_2_grid_spec():
    """Tests a non-positive spacing."""
    with pytest.raises(Exception) as excinfo:
        GridSpec(spacing_x=0.0)
    assert """The grid specification is invalid.""" in str(excinfo.value)


def test_2_depth_map():
    """Tests cells that do not match the grid."""
    with pytest.raises(Exception) as excinfo:
        DepthMap(DEFAULT_GRID, np.zeros((3, 3)))
    assert """The depth cells do not match the grid dimensions.""" in str(excinfo.value)


def test_2_1_depth_map():
    """Tests infinite cells."""
    grid = GridSpec(width=2, height=1, origin_x=-1.0, origin_y=0.0, spacing_x=1.0, spacing_y=1.0)
    with pytest.raises(Exception) as excinfo:
        DepthMap(grid, np.array([[np.inf, 1.0]]))
    assert """The depth map contains infinite cells.""" in str(excinfo.value)


def test_2_2_depth_map():
    """Tests mirroring on a grid not centered on x = 0."""
    grid = GridSpec(width=2, height=1, origin_x=0.0, origin_y=0.0, spacing_x=1.0, spacing_y=1.0)
    with pytest.raises(Exception) as excinfo:
        DepthMap(grid, np.zeros((1, 2))).mirrored_x()
    assert """The depth map grid is not symmetric about x = 0.""" in str(excinfo.value)


def test_2_require_same_grid():
    """Tests maps on different grids."""
    other = GridSpec(width=120, height=120, spacing_x=1.0, spacing_y=1.0, origin_x=-60.0)
    with pytest.raises(Exception) as excinfo:
        require_same_grid("test_2_require_same_grid", DepthMap.empty(DEFAULT_GRID), DepthMap.empty(other))
    assert """The depth maps do not share one grid specification.""" in str(excinfo.value)
