"""
This module is designed to assist with scan file actions.

PLY (ascii and binary little endian) is read and written. OBJ is read only.
Depth maps are exported to and imported from a plain CSV grid.
"""
# Built-in/Generic Imports
import os
import logging
from typing import Optional, List, Tuple

# Libraries
import numpy as np
from fchecker.type import type_check
from fchecker.file import file_check

# Local Functions
from ..helpers.py_helper import get_function_name
from ..geometry.mesh import TriMesh
from ..geometry.depth_map import DepthMap, GridSpec

# Exceptions
from fexception import FCustomException

__author__ = "IncognitoCoding"
__copyright__ = "Copyright 2022, mesh_io_director"
__credits__ = ["IncognitoCoding"]
__license__ = "MIT"
__version__ = "1.2"
__maintainer__ = "IncognitoCoding"
__status__ = "Production"


class MalformedFile(Exception):
    """Exception raised when a scan file does not parse under its declared format."""

    __module__ = "builtins"
    pass


class UnsupportedFormat(Exception):
    """Exception raised for an unknown or read-only file format."""

    __module__ = "builtins"
    pass


class EmptyMesh(Exception):
    """Exception raised when a scan file holds zero vertices."""

    __module__ = "builtins"
    pass


class IoFailure(Exception):
    """Exception raised when a file cannot be written."""

    __module__ = "builtins"
    pass


PLY_TYPES = {
    "char": "i1",
    "int8": "i1",
    "uchar": "u1",
    "uint8": "u1",
    "short": "i2",
    "int16": "i2",
    "ushort": "u2",
    "uint16": "u2",
    "int": "i4",
    "int32": "i4",
    "uint": "u4",
    "uint32": "u4",
    "float": "f4",
    "float32": "f4",
    "double": "f8",
    "float64": "f8",
}
# Quality values below this mark a hole vertex.
QUALITY_VALID_FLOOR = 0.5


def _malformed(main_message: str, path: str, returned_result=None, tb_remove_name: str = "read_mesh"):
    exc_args = {
        "main_message": main_message,
        "custom_type": MalformedFile,
        "expected_result": f"A well-formed scan file ({path}).",
        "returned_result": returned_result,
        "suggested_resolution": "Re-export the scan or check the declared element counts.",
    }
    return MalformedFile(FCustomException(message_args=exc_args, tb_remove_name=tb_remove_name))


def _resolve_format(path: str, mesh_format: Optional[str], tb_remove_name: str) -> str:
    resolved = (mesh_format or os.path.splitext(path)[1].lstrip(".")).upper()
    if resolved not in ("PLY", "OBJ"):
        exc_args = {
            "main_message": "The mesh format is not supported.",
            "custom_type": UnsupportedFormat,
            "expected_result": ["PLY", "OBJ"],
            "returned_result": resolved,
        }
        raise UnsupportedFormat(FCustomException(message_args=exc_args, tb_remove_name=tb_remove_name))
    return resolved


def _fan(polygon: List[int]) -> List[Tuple[int, int, int]]:
    return [(polygon[0], polygon[i], polygon[i + 1]) for i in range(1, len(polygon) - 1)]


def _parse_ply_header(data: bytes, path: str):
    marker = data.find(b"end_header")
    if not data.startswith(b"ply") or marker < 0:
        raise _malformed("The PLY header is missing or incomplete.", path, data[:40])
    body_start = data.find(b"\n", marker) + 1
    lines = data[:marker].decode("ascii", errors="replace").splitlines()

    file_format = None
    elements: list = []
    for line in lines[1:]:
        tokens = line.split()
        if not tokens or tokens[0] in ("comment", "obj_info"):
            continue
        if tokens[0] == "format":
            file_format = tokens[1]
        elif tokens[0] == "element":
            elements.append({"name": tokens[1], "count": int(tokens[2]), "properties": []})
        elif tokens[0] == "property" and elements:
            if tokens[1] == "list":
                if tokens[2] not in PLY_TYPES or tokens[3] not in PLY_TYPES:
                    raise _malformed("The PLY list property type is unknown.", path, line)
                elements[-1]["properties"].append((tokens[4], "list", PLY_TYPES[tokens[2]], PLY_TYPES[tokens[3]]))
            else:
                if tokens[1] not in PLY_TYPES:
                    raise _malformed("The PLY property type is unknown.", path, line)
                elements[-1]["properties"].append((tokens[2], PLY_TYPES[tokens[1]]))
        else:
            raise _malformed("The PLY header contains an unknown record.", path, line)

    if file_format not in ("ascii", "binary_little_endian"):
        exc_args = {
            "main_message": "The PLY encoding is not supported.",
            "custom_type": UnsupportedFormat,
            "expected_result": ["ascii", "binary_little_endian"],
            "returned_result": file_format,
        }
        raise UnsupportedFormat(FCustomException(message_args=exc_args, tb_remove_name="read_mesh"))
    return file_format, elements, body_start


def _read_ply_ascii(body: bytes, elements: list, path: str):
    lines = [line for line in body.decode("ascii", errors="replace").splitlines() if line.strip()]
    cursor = 0
    vertex_block = None
    faces: List[Tuple[int, int, int]] = []
    for element in elements:
        count = element["count"]
        if cursor + count > len(lines):
            raise _malformed(
                f"The PLY body holds fewer '{element['name']}' records than the header declares.",
                path,
                f"declared {count}, found {len(lines) - cursor}",
            )
        block = lines[cursor : cursor + count]
        cursor += count
        if element["name"] == "vertex":
            width = len(element["properties"])
            try:
                vertex_block = np.array([[float(token) for token in line.split()] for line in block], dtype=np.float64)
            except ValueError as exc:
                raise _malformed("A PLY vertex record is not numeric.", path, str(exc))
            if count and vertex_block.shape != (count, width):
                raise _malformed("A PLY vertex record has the wrong property count.", path, vertex_block.shape)
            vertex_block = vertex_block.reshape(count, width)
        elif element["name"] == "face":
            for line in block:
                tokens = line.split()
                n = int(tokens[0])
                if len(tokens) != n + 1:
                    raise _malformed("A PLY face record has the wrong index count.", path, line)
                faces.extend(_fan([int(token) for token in tokens[1:]]))
    if cursor != len(lines):
        raise _malformed("The PLY body holds more records than the header declares.", path, len(lines) - cursor)
    return vertex_block, faces


def _read_ply_binary(body: bytes, elements: list, path: str):
    offset = 0
    vertex_block = None
    faces: List[Tuple[int, int, int]] = []
    for element in elements:
        count = element["count"]
        properties = element["properties"]
        if any(len(prop) == 4 for prop in properties):
            if len(properties) != 1:
                raise _malformed("Only single list properties are supported in binary PLY elements.", path)
            _, _, count_type, index_type = properties[0]
            count_dtype = np.dtype("<" + count_type)
            index_dtype = np.dtype("<" + index_type)
            # Fast path when every polygon is a triangle.
            triangle_dtype = np.dtype([("n", count_dtype), ("v", index_dtype, (3,))])
            if len(body) - offset >= count * triangle_dtype.itemsize:
                block = np.frombuffer(body, dtype=triangle_dtype, count=count, offset=offset)
                if np.all(block["n"] == 3):
                    if element["name"] == "face":
                        faces.extend(map(tuple, block["v"].astype(np.int64).tolist()))
                    offset += count * triangle_dtype.itemsize
                    continue
            for _ in range(count):
                if offset + count_dtype.itemsize > len(body):
                    raise _malformed("The binary PLY body ended inside a list record.", path)
                n = int(np.frombuffer(body, dtype=count_dtype, count=1, offset=offset)[0])
                offset += count_dtype.itemsize
                if offset + n * index_dtype.itemsize > len(body):
                    raise _malformed("The binary PLY body ended inside a list record.", path)
                indices = np.frombuffer(body, dtype=index_dtype, count=n, offset=offset).astype(np.int64).tolist()
                offset += n * index_dtype.itemsize
                if element["name"] == "face":
                    faces.extend(_fan(indices))
        else:
            dtype = np.dtype([(name, "<" + ply_type) for name, ply_type in properties])
            if len(body) - offset < count * dtype.itemsize:
                raise _malformed(
                    f"The binary PLY body holds fewer '{element['name']}' records than the header declares.",
                    path,
                    f"{len(body) - offset} bytes for {count} records of {dtype.itemsize} bytes",
                )
            block = np.frombuffer(body, dtype=dtype, count=count, offset=offset)
            offset += count * dtype.itemsize
            if element["name"] == "vertex":
                vertex_block = np.stack([block[name].astype(np.float64) for name, _ in properties], axis=1)
                vertex_block = vertex_block.reshape(count, len(properties))
    if offset != len(body) and body[offset:].strip():
        raise _malformed("The binary PLY body holds more data than the header declares.", path, len(body) - offset)
    return vertex_block, faces


def _read_ply(path: str) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    with open(path, "rb") as file:
        data = file.read()
    file_format, elements, body_start = _parse_ply_header(data, path)
    vertex_elements = [element for element in elements if element["name"] == "vertex"]
    if not vertex_elements:
        raise _malformed("The PLY header declares no vertex element.", path)
    names = [prop[0] for prop in vertex_elements[0]["properties"]]
    if not {"x", "y", "z"}.issubset(names):
        raise _malformed("The PLY vertex element lacks x, y or z.", path, names)

    body = data[body_start:]
    if file_format == "ascii":
        vertex_block, faces = _read_ply_ascii(body, elements, path)
    else:
        vertex_block, faces = _read_ply_binary(body, elements, path)

    vertices = vertex_block[:, [names.index("x"), names.index("y"), names.index("z")]]
    if "quality" in names:
        valid = vertex_block[:, names.index("quality")] >= QUALITY_VALID_FLOOR
    else:
        valid = np.ones(len(vertices), dtype=bool)
    return vertices, np.array(faces, dtype=np.int64).reshape(-1, 3), valid


def _read_obj(path: str) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    vertices: List[List[float]] = []
    faces: List[Tuple[int, int, int]] = []
    with open(path, "r") as file:
        for line_number, line in enumerate(file, start=1):
            tokens = line.split()
            if not tokens:
                continue
            try:
                if tokens[0] == "v":
                    vertices.append([float(token) for token in tokens[1:4]])
                    if len(vertices[-1]) != 3:
                        raise ValueError("vertex needs three coordinates")
                elif tokens[0] == "f":
                    polygon = []
                    for token in tokens[1:]:
                        index = int(token.split("/")[0])
                        # OBJ indices are 1-based, negative ones count back from the latest vertex.
                        polygon.append(index - 1 if index > 0 else len(vertices) + index)
                    if len(polygon) < 3:
                        raise ValueError("face needs three indices")
                    faces.extend(_fan(polygon))
            except ValueError as exc:
                raise _malformed(f"OBJ record on line {line_number} does not parse.", path, str(exc))
    return (
        np.array(vertices, dtype=np.float64).reshape(-1, 3),
        np.array(faces, dtype=np.int64).reshape(-1, 3),
        np.ones(len(vertices), dtype=bool),
    )


def read_mesh(path: str, mesh_format: Optional[str] = None) -> TriMesh:
    """
    Reads a scan file into a TriMesh.

    Faces touching invalid (hole) vertices are dropped so the mesh invariants hold.

    Args:
        path (str):
        \t\\- The scan file path.
        mesh_format (str, optional):
        \t\\- PLY or OBJ. Defaults to the file extension.

    Raises:
        FTypeError (fexception):
        \t\\- The object value '{path}' is not an instance of the required class(es) or subclass(es).
        FFileNotFoundError (fexception):
        \t\\- The file does not exist.
        UnsupportedFormat:
        \t\\- The mesh format is not supported.
        MalformedFile:
        \t\\- The file does not parse under the declared format.
        EmptyMesh:
        \t\\- The scan file holds zero vertices.

    Returns:
        TriMesh:
        \t\\- The loaded mesh.
    """
    logger = logging.getLogger(__name__)
    logger.debug(f"=" * 20 + get_function_name() + "=" * 20)
    # Custom flowchart tracking. This is ideal for large projects that move a lot.
    # For any third-party modules, set the flow before making the function call.
    logger_flowchart = logging.getLogger("flowchart")
    logger_flowchart.debug(f"Flowchart --> Function: {get_function_name()}")

    type_check(value=path, required_type=str, tb_remove_name="read_mesh")
    if mesh_format:
        type_check(value=mesh_format, required_type=str, tb_remove_name="read_mesh")

    logger.debug(
        "Passing parameters:\n"
        f"  - path (str):\n        - {path}\n"
        f"  - mesh_format (str):\n        - {mesh_format}\n"
    )

    resolved_format = _resolve_format(path, mesh_format, "read_mesh")
    file_check(path)

    if resolved_format == "PLY":
        vertices, faces, valid = _read_ply(path)
    else:
        vertices, faces, valid = _read_obj(path)

    if len(vertices) == 0:
        exc_args = {
            "main_message": "The scan file holds zero vertices.",
            "custom_type": EmptyMesh,
            "returned_result": path,
        }
        raise EmptyMesh(FCustomException(message_args=exc_args, tb_remove_name="read_mesh"))
    if faces.size and (faces.min() < 0 or faces.max() >= len(vertices)):
        raise _malformed("A face references a vertex that does not exist.", path, f"{faces.min()}..{faces.max()}")

    if faces.size:
        faces = faces[np.all(valid[faces], axis=1)]
    mesh = TriMesh(vertices, faces, valid)
    logger.debug(f"Returning value(s):\n  - Return = {mesh.n_vertices} vertices, {mesh.n_faces} faces")
    return mesh


def write_mesh(mesh: TriMesh, path: str, mesh_format: Optional[str] = None, encoding: str = "binary") -> None:
    """
    Writes a TriMesh to a PLY file.

    Coordinates are stored as doubles and validity as a per-vertex quality
    property (1.0 valid, 0.0 hole), so the file re-reads to an equal mesh.

    Args:
        mesh (TriMesh):
        \t\\- The mesh being written.
        path (str):
        \t\\- The output path.
        mesh_format (str, optional):
        \t\\- PLY. Defaults to the file extension. OBJ is read only.
        encoding (str, optional):
        \t\\- binary (little endian) or ascii. Defaults to binary.

    Raises:
        FTypeError (fexception):
        \t\\- The object value '{mesh}' is not an instance of the required class(es) or subclass(es).
        UnsupportedFormat:
        \t\\- The mesh format is not supported for writing.
        IoFailure:
        \t\\- The mesh file failed to write.
    """
    logger = logging.getLogger(__name__)
    logger.debug(f"=" * 20 + get_function_name() + "=" * 20)
    # Custom flowchart tracking. This is ideal for large projects that move a lot.
    # For any third-party modules, set the flow before making the function call.
    logger_flowchart = logging.getLogger("flowchart")
    logger_flowchart.debug(f"Flowchart --> Function: {get_function_name()}")

    type_check(value=mesh, required_type=TriMesh, tb_remove_name="write_mesh")
    type_check(value=path, required_type=str, tb_remove_name="write_mesh")
    type_check(value=encoding, required_type=str, tb_remove_name="write_mesh")

    logger.debug(
        "Passing parameters:\n"
        f"  - mesh (TriMesh):\n        - {mesh.n_vertices} vertices, {mesh.n_faces} faces\n"
        f"  - path (str):\n        - {path}\n"
        f"  - mesh_format (str):\n        - {mesh_format}\n"
        f"  - encoding (str):\n        - {encoding}\n"
    )

    resolved_format = _resolve_format(path, mesh_format, "write_mesh")
    if resolved_format != "PLY" or encoding not in ("binary", "ascii"):
        exc_args = {
            "main_message": "The mesh format is not supported for writing.",
            "custom_type": UnsupportedFormat,
            "expected_result": "PLY with binary or ascii encoding",
            "returned_result": f"{resolved_format} ({encoding})",
            "suggested_resolution": "OBJ is read only. Write PLY instead.",
        }
        raise UnsupportedFormat(FCustomException(message_args=exc_args, tb_remove_name="write_mesh"))

    header = "\n".join(
        [
            "ply",
            "format binary_little_endian 1.0" if encoding == "binary" else "format ascii 1.0",
            "comment morph3dkit",
            f"element vertex {mesh.n_vertices}",
            "property double x",
            "property double y",
            "property double z",
            "property float quality",
            f"element face {mesh.n_faces}",
            "property list uchar int vertex_indices",
            "end_header",
        ]
    )
    quality = mesh.valid.astype(np.float32)
    try:
        with open(path, "wb") as file:
            file.write(header.encode("ascii") + b"\n")
            if encoding == "binary":
                vertex_records = np.empty(
                    mesh.n_vertices, dtype=[("x", "<f8"), ("y", "<f8"), ("z", "<f8"), ("quality", "<f4")]
                )
                vertex_records["x"], vertex_records["y"], vertex_records["z"] = mesh.vertices.T
                vertex_records["quality"] = quality
                face_records = np.empty(mesh.n_faces, dtype=[("n", "u1"), ("v", "<i4", (3,))])
                face_records["n"] = 3
                face_records["v"] = mesh.faces
                file.write(vertex_records.tobytes())
                file.write(face_records.tobytes())
            else:
                lines = [
                    f"{x:.17g} {y:.17g} {z:.17g} {q:g}" for (x, y, z), q in zip(mesh.vertices.tolist(), quality.tolist())
                ]
                lines.extend(f"3 {a} {b} {c}" for a, b, c in mesh.faces.tolist())
                file.write(("\n".join(lines) + ("\n" if lines else "")).encode("ascii"))
    except OSError as exc:
        exc_args = {
            "main_message": "The mesh file failed to write.",
            "custom_type": IoFailure,
            "original_exception": exc,
            "returned_result": path,
        }
        raise IoFailure(FCustomException(message_args=exc_args, tb_remove_name="write_mesh"))
    logger.debug(f"Mesh written to {path}")


def write_depth_csv(depth_map: DepthMap, path: str) -> None:
    """
    Writes a depth map as a CSV grid.

    The first line is a '# grid' comment holding the grid specification,
    followed by one row per grid row (row 0 first), NaN for HOLE.

    Raises:
        FTypeError (fexception):
        \t\\- The object value '{depth_map}' is not an instance of the required class(es) or subclass(es).
        IoFailure:
        \t\\- The depth map file failed to write.
    """
    logger = logging.getLogger(__name__)
    logger.debug(f"=" * 20 + get_function_name() + "=" * 20)
    # Custom flowchart tracking. This is ideal for large projects that move a lot.
    # For any third-party modules, set the flow before making the function call.
    logger_flowchart = logging.getLogger("flowchart")
    logger_flowchart.debug(f"Flowchart --> Function: {get_function_name()}")

    type_check(value=depth_map, required_type=DepthMap, tb_remove_name="write_depth_csv")
    type_check(value=path, required_type=str, tb_remove_name="write_depth_csv")

    grid = depth_map.grid
    header = (
        f"grid {grid.width} {grid.height} {grid.origin_x!r} {grid.origin_y!r} {grid.spacing_x!r} {grid.spacing_y!r}"
    )
    rows = [",".join("NaN" if np.isnan(value) else f"{value:.17g}" for value in row) for row in depth_map.cells.tolist()]
    try:
        with open(path, "w") as file:
            file.write("# " + header + "\n" + "\n".join(rows) + "\n")
    except OSError as exc:
        exc_args = {
            "main_message": "The depth map file failed to write.",
            "custom_type": IoFailure,
            "original_exception": exc,
            "returned_result": path,
        }
        raise IoFailure(FCustomException(message_args=exc_args, tb_remove_name="write_depth_csv"))


def read_depth_csv(path: str) -> DepthMap:
    """
    Reads a depth map written by write_depth_csv.

    Raises:
        FTypeError (fexception):
        \t\\- The object value '{path}' is not an instance of the required class(es) or subclass(es).
        FFileNotFoundError (fexception):
        \t\\- The file does not exist.
        MalformedFile:
        \t\\- The depth map CSV header or body does not parse.
    """
    logger = logging.getLogger(__name__)
    logger.debug(f"=" * 20 + get_function_name() + "=" * 20)
    # Custom flowchart tracking. This is ideal for large projects that move a lot.
    # For any third-party modules, set the flow before making the function call.
    logger_flowchart = logging.getLogger("flowchart")
    logger_flowchart.debug(f"Flowchart --> Function: {get_function_name()}")

    type_check(value=path, required_type=str, tb_remove_name="read_depth_csv")
    file_check(path)

    with open(path, "r") as file:
        header = file.readline().lstrip("#").split()
    if len(header) != 7 or header[0] != "grid":
        raise _malformed("The depth map CSV lacks a grid header.", path, header, tb_remove_name="read_depth_csv")
    grid = GridSpec(int(header[1]), int(header[2]), *(float(value) for value in header[3:]))
    try:
        cells = np.loadtxt(path, delimiter=",", comments="#", ndmin=2)
    except ValueError as exc:
        raise _malformed("The depth map CSV body does not parse.", path, str(exc), tb_remove_name="read_depth_csv")
    if cells.shape != grid.shape:
        raise _malformed(
            "The depth map CSV body does not match its grid header.",
            path,
            f"{cells.shape} vs {grid.shape}",
            tb_remove_name="read_depth_csv",
        )
    return DepthMap(grid, cells)
