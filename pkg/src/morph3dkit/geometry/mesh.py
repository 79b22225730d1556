"""
Triangle mesh type shared by every stage.

Vertices are millimeters in a right-handed frame with z toward the sensor.
Validity flags mark missing measurements (holes). A face never references
an invalid vertex.
"""
# Built-in/Generic Imports
import logging
from dataclasses import dataclass
from typing import Optional

# Libraries
import numpy as np
from fchecker.type import type_check

# Local Functions
from ..helpers.py_helper import get_function_name
from .transform import RigidTransform

# Exceptions
from fexception import FCustomException
from .exceptions import InvalidGeometry

__author__ = "IncognitoCoding"
__copyright__ = "Copyright 2022, mesh"
__credits__ = ["IncognitoCoding"]
__license__ = "MIT"
__version__ = "0.4"
__maintainer__ = "IncognitoCoding"
__status__ = "Production"


def _raise_invalid(main_message: str, expected_result, returned_result) -> None:
    exc_args = {
        "main_message": main_message,
        "custom_type": InvalidGeometry,
        "expected_result": expected_result,
        "returned_result": returned_result,
    }
    raise InvalidGeometry(FCustomException(message_args=exc_args, tb_remove_name="__post_init__"))


@dataclass(frozen=True, eq=False)
class TriMesh:
    """
    Immutable triangle mesh with optional per-vertex validity.

    Attributes:
        vertices (np.ndarray):
        \t\\- (N, 3) float64 coordinates in millimeters.
        faces (np.ndarray):
        \t\\- (M, 3) int64 vertex indices. A point cloud has M == 0.
        valid (np.ndarray, optional):
        \t\\- (N,) bool flags. False marks a hole vertex. Defaults to all True.
    """

    vertices: np.ndarray
    faces: np.ndarray
    valid: Optional[np.ndarray] = None

    def __post_init__(self) -> None:
        vertices = np.array(self.vertices, dtype=np.float64)
        if vertices.size == 0:
            vertices = vertices.reshape(0, 3)
        if vertices.ndim != 2 or vertices.shape[1] != 3:
            _raise_invalid("The vertex array has the wrong shape.", "(N, 3)", vertices.shape)
        if not np.all(np.isfinite(vertices)):
            _raise_invalid("The mesh contains non-finite vertex coordinates.", "finite coordinates", "NaN or inf")

        faces = np.array(self.faces, dtype=np.int64)
        if faces.size == 0:
            faces = faces.reshape(0, 3)
        if faces.ndim != 2 or faces.shape[1] != 3:
            _raise_invalid("The face array has the wrong shape.", "(M, 3)", faces.shape)
        if faces.size and (faces.min() < 0 or faces.max() >= len(vertices)):
            _raise_invalid(
                "A face references a vertex index outside the vertex array.",
                f"indices in [0, {len(vertices)})",
                f"[{faces.min()}, {faces.max()}]",
            )

        if self.valid is None:
            valid = np.ones(len(vertices), dtype=bool)
        else:
            valid = np.array(self.valid, dtype=bool).reshape(-1)
        if valid.shape != (len(vertices),):
            _raise_invalid("The validity flags do not match the vertex count.", len(vertices), valid.shape)
        if faces.size and not np.all(valid[faces]):
            _raise_invalid("A face references an invalid vertex.", "faces over valid vertices only", "hole vertex")

        for array in (vertices, faces, valid):
            array.setflags(write=False)
        object.__setattr__(self, "vertices", vertices)
        object.__setattr__(self, "faces", faces)
        object.__setattr__(self, "valid", valid)

    @property
    def n_vertices(self) -> int:
        return int(len(self.vertices))

    @property
    def n_faces(self) -> int:
        return int(len(self.faces))

    def valid_vertices(self) -> np.ndarray:
        return self.vertices[self.valid]

    def subset(self, keep: np.ndarray) -> "TriMesh":
        """Keeps the flagged vertices, drops faces touching removed vertices and remaps the rest."""
        keep = np.asarray(keep, dtype=bool)
        remap = np.full(self.n_vertices, -1, dtype=np.int64)
        remap[keep] = np.arange(int(keep.sum()))
        faces = self.faces[np.all(keep[self.faces], axis=1)] if self.n_faces else self.faces
        return TriMesh(self.vertices[keep], remap[faces], self.valid[keep])

    def allclose(self, other: "TriMesh", atol: float = 1e-6) -> bool:
        """Topology and validity must match exactly, coordinates within atol."""
        return bool(
            self.vertices.shape == other.vertices.shape
            and np.array_equal(self.faces, other.faces)
            and np.array_equal(self.valid, other.valid)
            and np.allclose(self.vertices, other.vertices, rtol=0.0, atol=atol)
        )


def apply_transform(mesh: TriMesh, t: RigidTransform) -> TriMesh:
    """
    Moves every vertex v to R·v + t. Faces and validity flags are unchanged.

    Args:
        mesh (TriMesh):
        \t\\- The mesh being transformed.
        t (RigidTransform):
        \t\\- The rigid transform.

    Raises:
        FTypeError (fexception):
        \t\\- The object value '{mesh}' is not an instance of the required class(es) or subclass(es).
        FTypeError (fexception):
        \t\\- The object value '{t}' is not an instance of the required class(es) or subclass(es).

    Returns:
        TriMesh:
        \t\\- The transformed mesh.
    """
    logger = logging.getLogger(__name__)
    logger.debug(f"=" * 20 + get_function_name() + "=" * 20)
    # Custom flowchart tracking. This is ideal for large projects that move a lot.
    # For any third-party modules, set the flow before making the function call.
    logger_flowchart = logging.getLogger("flowchart")
    logger_flowchart.debug(f"Flowchart --> Function: {get_function_name()}")

    type_check(value=mesh, required_type=TriMesh, tb_remove_name="apply_transform")
    type_check(value=t, required_type=RigidTransform, tb_remove_name="apply_transform")

    logger.debug(
        "Passing parameters:\n"
        f"  - mesh (TriMesh):\n        - {mesh.n_vertices} vertices, {mesh.n_faces} faces\n"
        f"  - t (RigidTransform):\n        - {t.to_dict()}\n"
    )

    return TriMesh(t.apply(mesh.vertices), mesh.faces, mesh.valid)


def grid_triangulation(valid: np.ndarray) -> np.ndarray:
    """
    Triangulates a regular lattice of points.

    Lattice point (row, col) has flat index row * width + col, with rows running
    toward +y and columns toward +x. Each 2x2 block with four valid points gives two
    triangles, a block with exactly three valid points gives one. Triangles are
    counter-clockwise seen from +z.

    Args:
        valid (np.ndarray):
        \t\\- (height, width) bool mask of usable lattice points.

    Returns:
        np.ndarray:
        \t\\- (M, 3) int64 faces.
    """
    valid = np.asarray(valid, dtype=bool)
    height, width = valid.shape
    if height < 2 or width < 2:
        return np.zeros((0, 3), dtype=np.int64)

    rows, cols = np.meshgrid(np.arange(height - 1), np.arange(width - 1), indexing="ij")
    a = (rows * width + cols).ravel()
    b = a + 1
    c = a + width
    d = c + 1
    va, vb, vc, vd = (valid.ravel()[index] for index in (a, b, c, d))
    count = va.astype(int) + vb + vc + vd

    full = count == 4
    # Three valid corners: the triangle that skips the missing one.
    missing_a = (count == 3) & ~va
    missing_b = (count == 3) & ~vb
    missing_c = (count == 3) & ~vc
    missing_d = (count == 3) & ~vd

    triangles = [
        np.stack([a, b, d], axis=1)[full],
        np.stack([a, d, c], axis=1)[full],
        np.stack([b, d, c], axis=1)[missing_a],
        np.stack([a, d, c], axis=1)[missing_b],
        np.stack([a, b, d], axis=1)[missing_c],
        np.stack([a, b, c], axis=1)[missing_d],
    ]
    faces = np.concatenate(triangles, axis=0)
    # Ordered by lowest vertex index, i.e. by block.
    order = np.argsort(faces.min(axis=1), kind="stable")
    return faces[order].astype(np.int64)
