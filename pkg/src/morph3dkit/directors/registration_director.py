"""
This module is designed to register raw face meshes into the intrinsic nose-based frame.

The frame is defined by the facial symmetry plane (x = 0), the nose tip
(origin) and the nose bridge direction (+y), with z toward the sensor.
Registered meshes are rasterized to depth maps on a shared grid, which gives
dense cell-to-cell correspondence between faces.
"""
# Built-in/Generic Imports
import math
import logging
from dataclasses import dataclass, asdict
from typing import List, Optional, Sequence, Tuple

# Libraries
import numpy as np
from scipy.spatial import cKDTree
from fchecker.type import type_check

# Local Functions
from ..helpers.py_helper import get_function_name
from ..geometry.mesh import TriMesh
from ..geometry.transform import RigidTransform
from ..geometry.depth_map import DepthMap, GridSpec, DEFAULT_GRID, HOLE
from .thread_director import map_ordered

# Exceptions
from fexception import FCustomException

__author__ = "IncognitoCoding"
__copyright__ = "Copyright 2022, registration_director"
__credits__ = ["IncognitoCoding"]
__license__ = "MIT"
__version__ = "1.3"
__maintainer__ = "IncognitoCoding"
__status__ = "Production"


class EmptyRoi(Exception):
    """Exception raised when no face region survives the region of interest extraction."""

    __module__ = "builtins"
    pass


class NoConvergence(Exception):
    """Exception raised when the symmetry plane search ends above the residual reject bound."""

    __module__ = "builtins"
    pass


class NoNoseFound(Exception):
    """Exception raised when the symmetry profile has no protrusion above the prominence floor."""

    __module__ = "builtins"
    pass


class EmptyProjection(Exception):
    """Exception raised when rasterization covers no grid cell."""

    __module__ = "builtins"
    pass


@dataclass(frozen=True)
class RegistrationConfig:
    """Registration parameters. Lengths in millimeters, angles in degrees."""

    roi_radius_mm: float = 100.0
    density_radius_mm: float = 10.0
    density_min_neighbors: int = 8
    density_median_fraction: float = 0.5
    min_roi_vertices: int = 100
    search_max_angle_deg: float = 30.0
    search_max_offset_mm: float = 30.0
    angle_steps_deg: Tuple[float, float, float] = (5.0, 1.0, 0.2)
    coarse_bin_mm: float = 3.0
    coarse_extent_mm: float = 120.0
    max_search_points: int = 6000
    min_overlap_fraction: float = 0.25
    reject_residual_mm: float = 5.0
    profile_spacing_mm: float = 0.5
    profile_extent_mm: float = 120.0
    bridge_arc_mm: float = 30.0
    prominence_floor_mm: float = 5.0
    bridge_pitch_deg: float = 30.0

    def to_dict(self) -> dict:
        values = asdict(self)
        values["angle_steps_deg"] = list(self.angle_steps_deg)
        return values


DEFAULT_REGISTRATION = RegistrationConfig()


@dataclass(frozen=True, eq=False)
class SymmetryPlane:
    """
    Vertical symmetry plane in the raw frame.

    The normal is unit length with a positive x component. yaw_deg and roll_deg
    are the search angles the normal was built from: n = Rz(roll)·Ry(yaw)·e_x.
    """

    point: np.ndarray
    normal: np.ndarray
    residual: float
    yaw_deg: float
    roll_deg: float
    offset_mm: float


@dataclass(frozen=True, eq=False)
class IntrinsicRegistration:
    """
    Pose of a face in its intrinsic frame.

    Attributes:
        transform (RigidTransform):
        \t\\- raw frame -> intrinsic frame.
        nose_tip (np.ndarray):
        \t\\- Detected nose tip in the raw frame.
        residual (float):
        \t\\- Final mirrored-depth RMS of the symmetry plane, millimeters.
        bridge_slope (float):
        \t\\- Slope angle of the fitted bridge line in the plane frame, radians.
    """

    transform: RigidTransform
    nose_tip: np.ndarray
    residual: float
    bridge_slope: float
    plane: Optional[SymmetryPlane] = None

    @classmethod
    def identity(cls) -> "IntrinsicRegistration":
        """Registration of a mesh that already lives in its intrinsic frame."""
        return cls(RigidTransform.identity(), np.zeros(3), 0.0, 0.0, None)


def _debug_entry(logger_name: str, function_name: str) -> logging.Logger:
    logger = logging.getLogger(logger_name)
    logger.debug(f"=" * 20 + function_name + "=" * 20)
    # Custom flowchart tracking. This is ideal for large projects that move a lot.
    # For any third-party modules, set the flow before making the function call.
    logger_flowchart = logging.getLogger("flowchart")
    logger_flowchart.debug(f"Flowchart --> Function: {function_name}")
    return logger


def extract_roi(mesh: TriMesh, config: RegistrationConfig = DEFAULT_REGISTRATION) -> TriMesh:
    """
    Cuts the face region of interest out of a scan.

    The face center is the mean of the high-density vertices within the ROI
    radius of the frontmost high-density vertex. Density is the neighbor
    count within density_radius_mm; a vertex is dense when its count reaches
    max(density_min_neighbors, density_median_fraction * median count).

    Args:
        mesh (TriMesh):
        \t\\- The raw scan.
        config (RegistrationConfig, optional):
        \t\\- Registration parameters.

    Raises:
        FTypeError (fexception):
        \t\\- The object value '{mesh}' is not an instance of the required class(es) or subclass(es).
        EmptyRoi:
        \t\\- The scan has no dense face cluster.
        EmptyRoi:
        \t\\- Too few vertices survive the region of interest.

    Returns:
        TriMesh:
        \t\\- Vertices within roi_radius_mm of the face center, faces remapped.
    """
    logger = _debug_entry(__name__, get_function_name())

    type_check(value=mesh, required_type=TriMesh, tb_remove_name="extract_roi")
    type_check(value=config, required_type=RegistrationConfig, tb_remove_name="extract_roi")

    logger.debug(
        "Passing parameters:\n"
        f"  - mesh (TriMesh):\n        - {mesh.n_vertices} vertices, {mesh.n_faces} faces\n"
        f"  - config (RegistrationConfig):\n        - roi_radius_mm={config.roi_radius_mm}\n"
    )

    points = mesh.valid_vertices()
    dense = np.zeros(len(points), dtype=bool)
    if len(points):
        tree = cKDTree(points)
        counts = np.asarray(tree.query_ball_point(points, r=config.density_radius_mm, return_length=True))
        floor = max(float(config.density_min_neighbors), config.density_median_fraction * float(np.median(counts)))
        dense = counts >= floor
    if not np.any(dense):
        exc_args = {
            "main_message": "The scan has no dense face cluster.",
            "custom_type": EmptyRoi,
            "expected_result": f"vertices with at least {config.density_min_neighbors} neighbors within {config.density_radius_mm} mm",
            "returned_result": f"{len(points)} valid vertices, none dense",
            "suggested_resolution": "Check the scan units (millimeters) and sampling density.",
        }
        raise EmptyRoi(FCustomException(message_args=exc_args, tb_remove_name="extract_roi"))

    dense_points = points[dense]
    front = dense_points[np.argmax(dense_points[:, 2])]
    near_front = np.linalg.norm(dense_points - front, axis=1) <= config.roi_radius_mm
    center = dense_points[near_front].mean(axis=0)

    keep = np.linalg.norm(mesh.vertices - center, axis=1) <= config.roi_radius_mm
    survivors = int(np.count_nonzero(keep & mesh.valid))
    if survivors < config.min_roi_vertices:
        exc_args = {
            "main_message": "Too few vertices survive the region of interest.",
            "custom_type": EmptyRoi,
            "expected_result": f">= {config.min_roi_vertices} valid vertices",
            "returned_result": survivors,
        }
        raise EmptyRoi(FCustomException(message_args=exc_args, tb_remove_name="extract_roi"))

    roi = mesh.subset(keep)
    logger.debug(f"Returning value(s):\n  - Return = {roi.n_vertices} vertices around {center.tolist()}")
    return roi


def _plane_normal(yaw_deg: float, roll_deg: float) -> np.ndarray:
    yaw = math.radians(yaw_deg)
    roll = math.radians(roll_deg)
    return np.array([math.cos(roll) * math.cos(yaw), math.sin(roll) * math.cos(yaw), -math.sin(yaw)])


def _plane_frame(normal: np.ndarray) -> np.ndarray:
    """Columns (n, up, depth): depth is +z made orthogonal to n, up = depth x n."""
    depth = np.array([0.0, 0.0, 1.0]) - normal[2] * normal
    depth /= np.linalg.norm(depth)
    up = np.cross(depth, normal)
    return np.stack([normal, up, depth], axis=1)


class _MirrorScorer:
    """Mirrored-depth RMS of a point set, evaluated on a coarse (u_x, u_y) binning."""

    def __init__(self, centered: np.ndarray, config: RegistrationConfig) -> None:
        self.points = centered
        self.bin = config.coarse_bin_mm
        self.half = int(math.ceil(config.coarse_extent_mm / self.bin))
        self.size = 2 * self.half
        self.min_overlap_fraction = config.min_overlap_fraction

    def binned(self, frame: np.ndarray, shift: float) -> np.ndarray:
        local = self.points @ frame
        col = np.floor((local[:, 0] - shift) / self.bin).astype(np.int64) + self.half
        row = np.floor(local[:, 1] / self.bin).astype(np.int64) + self.half
        inside = (col >= 0) & (col < self.size) & (row >= 0) & (row < self.size)
        index = row[inside] * self.size + col[inside]
        sums = np.bincount(index, weights=local[inside, 2], minlength=self.size * self.size)
        counts = np.bincount(index, minlength=self.size * self.size)
        with np.errstate(invalid="ignore", divide="ignore"):
            depth = sums / counts
        depth[counts == 0] = np.nan
        return depth.reshape(self.size, self.size)

    def mirror_rms(self, depth: np.ndarray, m: int) -> float:
        # Reflection about u_x = shift + m * bin / 2 maps column j to column m + size - 1 - j.
        reversed_depth = depth[:, ::-1]
        mirrored = np.full_like(depth, np.nan)
        if m >= self.size or m <= -self.size:
            return math.inf
        if m >= 0:
            mirrored[:, m:] = reversed_depth[:, : self.size - m]
        else:
            mirrored[:, : self.size + m] = reversed_depth[:, -m:]
        diff = depth - mirrored
        joint = ~np.isnan(diff)
        overlap = int(np.count_nonzero(joint))
        if overlap == 0 or overlap < self.min_overlap_fraction * np.count_nonzero(~np.isnan(depth)):
            return math.inf
        return float(np.sqrt(np.mean(diff[joint] ** 2)))

    def score_candidates(self, yaw: float, roll: float, offsets: Sequence[float]) -> List[float]:
        frame = _plane_frame(_plane_normal(yaw, roll))
        half_bin = self.bin / 2.0
        scores = [math.inf] * len(offsets)
        # Offsets that differ by whole half-bins share one binning.
        groups: dict = {}
        for index, offset in enumerate(offsets):
            m = int(round(offset / half_bin))
            shift = round(offset - m * half_bin, 9)
            groups.setdefault(shift, []).append((index, m))
        for shift, members in groups.items():
            depth = self.binned(frame, shift)
            for index, m in members:
                scores[index] = self.mirror_rms(depth, m)
        return scores


def _symmetric_range(center: float, half_range: float, step: float) -> np.ndarray:
    count = int(round(half_range / step))
    return center + step * np.arange(-count, count + 1)


def find_symmetry_plane(roi: TriMesh, config: RegistrationConfig = DEFAULT_REGISTRATION) -> SymmetryPlane:
    """
    Finds the vertical symmetry plane of a face ROI.

    Candidates are (yaw, roll, lateral offset) triples around the ROI centroid.
    Each candidate is scored by reflecting the point set across the plane,
    binning original and mirror to a coarse depth grid and taking the RMS of
    the per-cell differences over jointly valid cells. Three grid stages
    refine the search (angle steps 5, 1 and 0.2 degrees). Ties keep the
    lowest-index candidate of the scan order.

    Args:
        roi (TriMesh):
        \t\\- The face region of interest.
        config (RegistrationConfig, optional):
        \t\\- Registration parameters.

    Raises:
        FTypeError (fexception):
        \t\\- The object value '{roi}' is not an instance of the required class(es) or subclass(es).
        EmptyRoi:
        \t\\- The region of interest holds no valid vertex.
        NoConvergence:
        \t\\- The symmetry residual is above the reject bound.

    Returns:
        SymmetryPlane:
        \t\\- The best plane and its residual in millimeters.
    """
    logger = _debug_entry(__name__, get_function_name())

    type_check(value=roi, required_type=TriMesh, tb_remove_name="find_symmetry_plane")
    type_check(value=config, required_type=RegistrationConfig, tb_remove_name="find_symmetry_plane")

    logger.debug(
        "Passing parameters:\n" f"  - roi (TriMesh):\n        - {roi.n_vertices} vertices, {roi.n_faces} faces\n"
    )

    points = roi.valid_vertices()
    if len(points) == 0:
        exc_args = {
            "main_message": "The region of interest holds no valid vertex.",
            "custom_type": EmptyRoi,
            "returned_result": roi.n_vertices,
        }
        raise EmptyRoi(FCustomException(message_args=exc_args, tb_remove_name="find_symmetry_plane"))
    centroid = points.mean(axis=0)
    if len(points) > config.max_search_points:
        stride = int(math.ceil(len(points) / config.max_search_points))
        points = points[::stride]
    scorer = _MirrorScorer(points - centroid, config)

    coarse_step, mid_step, fine_step = config.angle_steps_deg
    half_bin = config.coarse_bin_mm / 2.0
    stages = [
        (config.search_max_angle_deg, coarse_step, config.search_max_offset_mm, half_bin),
        (coarse_step, mid_step, half_bin, half_bin / 3.0),
        (mid_step, fine_step, half_bin / 3.0 - fine_step, fine_step),
    ]
    best = (0.0, 0.0, 0.0)
    best_score = math.inf
    for angle_range, angle_step, offset_range, offset_step in stages:
        yaws = _symmetric_range(best[0], angle_range, angle_step)
        rolls = _symmetric_range(best[1], angle_range, angle_step)
        offsets = _symmetric_range(best[2], offset_range, offset_step).tolist()
        stage_best = None
        stage_score = math.inf
        for yaw in yaws:
            for roll in rolls:
                scores = scorer.score_candidates(float(yaw), float(roll), offsets)
                index = int(np.argmin(scores))
                if scores[index] < stage_score:
                    stage_score = scores[index]
                    stage_best = (float(yaw), float(roll), float(offsets[index]))
        if stage_best is None:
            break
        best, best_score = stage_best, stage_score
        logger.debug(f"Symmetry stage step {angle_step} deg: yaw={best[0]:.2f}, roll={best[1]:.2f}, offset={best[2]:.2f}, rms={best_score:.3f}")

    if not math.isfinite(best_score) or best_score > config.reject_residual_mm:
        exc_args = {
            "main_message": "The symmetry residual is above the reject bound.",
            "custom_type": NoConvergence,
            "expected_result": f"<= {config.reject_residual_mm} mm",
            "returned_result": best_score,
            "suggested_resolution": "Check that the scan is a frontal face within the search bounds.",
        }
        raise NoConvergence(FCustomException(message_args=exc_args, tb_remove_name="find_symmetry_plane"))

    normal = _plane_normal(best[0], best[1])
    plane = SymmetryPlane(
        point=centroid + best[2] * normal,
        normal=normal,
        residual=float(best_score),
        yaw_deg=best[0],
        roll_deg=best[1],
        offset_mm=best[2],
    )
    logger.debug(f"Returning value(s):\n  - Return = normal {normal.tolist()}, residual {plane.residual:.3f} mm")
    return plane


def _splat_vertices(vertices: np.ndarray, grid: GridSpec) -> np.ndarray:
    """Inverse-distance depth of up to 4 nearby vertices per cell center. Used for point clouds."""
    cells = np.full(grid.shape, HOLE)
    if len(vertices) == 0:
        return cells
    tree = cKDTree(vertices[:, :2])
    point_spacing = 0.0
    if len(vertices) > 1:
        point_spacing = float(np.median(tree.query(vertices[:, :2], k=2)[0][:, 1]))
    radius = max(grid.spacing_x, grid.spacing_y, point_spacing)
    grid_x, grid_y = np.meshgrid(grid.x_centers(), grid.y_centers())
    centers = np.column_stack([grid_x.ravel(), grid_y.ravel()])
    k = min(4, len(vertices))
    distance, index = tree.query(centers, k=k, distance_upper_bound=radius)
    distance = distance.reshape(len(centers), k)
    index = index.reshape(len(centers), k)
    found = np.isfinite(distance)
    weights = np.where(found, 1.0 / (distance + 1e-9), 0.0)
    depth = np.where(found, vertices[np.where(found, index, 0), 2], 0.0)
    total = weights.sum(axis=1)
    covered = total > 0
    cells.ravel()[covered] = (weights * depth).sum(axis=1)[covered] / total[covered]
    return cells


def _rasterize_vertices(
    vertices: np.ndarray, faces: np.ndarray, grid: GridSpec, valid: Optional[np.ndarray] = None
) -> np.ndarray:
    """
    Max-z triangle rasterization of already transformed vertices onto grid cell centers.

    A vertex set without faces is splatted instead, valid vertices only.
    """
    if len(faces) == 0:
        return _splat_vertices(vertices if valid is None else vertices[valid], grid)
    cells = np.full(grid.shape, HOLE)
    eps = 1e-9
    tri = vertices[faces]
    x, y, z = tri[:, :, 0], tri[:, :, 1], tri[:, :, 2]

    col_lo = np.ceil((x.min(axis=1) - grid.origin_x) / grid.spacing_x - 0.5 - eps).astype(np.int64)
    col_hi = np.floor((x.max(axis=1) - grid.origin_x) / grid.spacing_x - 0.5 + eps).astype(np.int64)
    row_lo = np.ceil((y.min(axis=1) - grid.origin_y) / grid.spacing_y - 0.5 - eps).astype(np.int64)
    row_hi = np.floor((y.max(axis=1) - grid.origin_y) / grid.spacing_y - 0.5 + eps).astype(np.int64)
    col_lo = np.maximum(col_lo, 0)
    row_lo = np.maximum(row_lo, 0)
    col_hi = np.minimum(col_hi, grid.width - 1)
    row_hi = np.minimum(row_hi, grid.height - 1)

    n_cols = col_hi - col_lo + 1
    n_rows = row_hi - row_lo + 1
    denom = (y[:, 1] - y[:, 2]) * (x[:, 0] - x[:, 2]) + (x[:, 2] - x[:, 1]) * (y[:, 0] - y[:, 2])
    usable = (n_cols > 0) & (n_rows > 0) & (np.abs(denom) > 1e-12)
    if not np.any(usable):
        return cells
    ids = np.nonzero(usable)[0]
    counts = n_cols[ids] * n_rows[ids]

    # One candidate per (triangle, cell in its bounding box).
    owner = np.repeat(ids, counts)
    local = np.arange(int(counts.sum())) - np.repeat(np.cumsum(counts) - counts, counts)
    col = col_lo[owner] + local % n_cols[owner]
    row = row_lo[owner] + local // n_cols[owner]
    px = grid.origin_x + (col + 0.5) * grid.spacing_x
    py = grid.origin_y + (row + 0.5) * grid.spacing_y

    xo, yo, d = x[owner], y[owner], denom[owner]
    l0 = ((yo[:, 1] - yo[:, 2]) * (px - xo[:, 2]) + (xo[:, 2] - xo[:, 1]) * (py - yo[:, 2])) / d
    l1 = ((yo[:, 2] - yo[:, 0]) * (px - xo[:, 2]) + (xo[:, 0] - xo[:, 2]) * (py - yo[:, 2])) / d
    l2 = 1.0 - l0 - l1
    inside = (l0 >= -eps) & (l1 >= -eps) & (l2 >= -eps)
    if not np.any(inside):
        return cells
    zo = z[owner[inside]]
    depth = l0[inside] * zo[:, 0] + l1[inside] * zo[:, 1] + l2[inside] * zo[:, 2]
    flat = row[inside] * grid.width + col[inside]

    # Z-buffer: keep the largest depth (closest to the sensor) per cell.
    order = np.lexsort((depth, flat))
    flat_sorted = flat[order]
    last = np.r_[flat_sorted[1:] != flat_sorted[:-1], True]
    cells.ravel()[flat_sorted[last]] = depth[order][last]
    return cells


def detect_nose_features(
    roi: TriMesh, plane: SymmetryPlane, config: RegistrationConfig = DEFAULT_REGISTRATION
) -> Tuple[np.ndarray, float]:
    """
    Finds the nose tip and the nose bridge slope on the symmetry profile.

    The profile is the ROI surface sampled along the plane (plane frame x' = 0)
    every profile_spacing_mm. The tip is the profile sample with the largest
    perpendicular protrusion from the chord joining the profile ends. The
    bridge slope is the angle of a least-squares line over the profile from
    the tip upward along bridge_arc_mm of arc length.

    Args:
        roi (TriMesh):
        \t\\- The face region of interest.
        plane (SymmetryPlane):
        \t\\- The symmetry plane.
        config (RegistrationConfig, optional):
        \t\\- Registration parameters.

    Raises:
        FTypeError (fexception):
        \t\\- The object value '{roi}' is not an instance of the required class(es) or subclass(es).
        NoNoseFound:
        \t\\- The symmetry profile is too short.
        NoNoseFound:
        \t\\- The symmetry profile has no protrusion above the prominence floor.

    Returns:
        Tuple[np.ndarray, float]:
        \t\\- Nose tip in the raw frame and bridge slope in radians (plane frame, dz/dy).
    """
    logger = _debug_entry(__name__, get_function_name())

    type_check(value=roi, required_type=TriMesh, tb_remove_name="detect_nose_features")
    type_check(value=plane, required_type=SymmetryPlane, tb_remove_name="detect_nose_features")

    logger.debug(
        "Passing parameters:\n"
        f"  - roi (TriMesh):\n        - {roi.n_vertices} vertices\n"
        f"  - plane (SymmetryPlane):\n        - normal {plane.normal.tolist()}, point {plane.point.tolist()}\n"
    )

    frame = _plane_frame(plane.normal)
    local = (roi.vertices - plane.point) @ frame
    spacing = config.profile_spacing_mm
    strip = GridSpec(
        width=1,
        height=int(round(2 * config.profile_extent_mm / spacing)),
        origin_x=-spacing / 2.0,
        origin_y=-config.profile_extent_mm,
        spacing_x=spacing,
        spacing_y=spacing,
    )
    profile = _rasterize_vertices(local, roi.faces, strip, roi.valid)[:, 0]
    valid = ~np.isnan(profile)
    ys = strip.y_centers()[valid]
    zs = profile[valid]
    if len(ys) < 10:
        exc_args = {
            "main_message": "The symmetry profile is too short.",
            "custom_type": NoNoseFound,
            "expected_result": ">= 10 profile samples",
            "returned_result": len(ys),
        }
        raise NoNoseFound(FCustomException(message_args=exc_args, tb_remove_name="detect_nose_features"))

    chord = np.array([ys[-1] - ys[0], zs[-1] - zs[0]])
    normal = np.array([-chord[1], chord[0]]) / np.linalg.norm(chord)
    protrusion = (ys - ys[0]) * normal[0] + (zs - zs[0]) * normal[1]
    tip_index = int(np.argmax(protrusion))
    if protrusion[tip_index] < config.prominence_floor_mm:
        exc_args = {
            "main_message": "The symmetry profile has no protrusion above the prominence floor.",
            "custom_type": NoNoseFound,
            "expected_result": f">= {config.prominence_floor_mm} mm",
            "returned_result": float(protrusion[tip_index]),
        }
        raise NoNoseFound(FCustomException(message_args=exc_args, tb_remove_name="detect_nose_features"))

    arc = np.concatenate([[0.0], np.cumsum(np.hypot(np.diff(ys[tip_index:]), np.diff(zs[tip_index:])))])
    segment = slice(tip_index, tip_index + int(np.searchsorted(arc, config.bridge_arc_mm, side="right")))
    if len(ys[segment]) < 3:
        exc_args = {
            "main_message": "The symmetry profile is too short above the nose tip to fit the bridge.",
            "custom_type": NoNoseFound,
            "expected_result": ">= 3 profile samples above the tip",
            "returned_result": len(ys[segment]),
        }
        raise NoNoseFound(FCustomException(message_args=exc_args, tb_remove_name="detect_nose_features"))
    slope = float(np.polyfit(ys[segment], zs[segment], 1)[0])
    bridge_slope = math.atan(slope)

    nose_tip = plane.point + ys[tip_index] * frame[:, 1] + zs[tip_index] * frame[:, 2]
    logger.debug(f"Returning value(s):\n  - Return = tip {nose_tip.tolist()}, bridge slope {bridge_slope:.4f} rad")
    return nose_tip, bridge_slope


def register(mesh: TriMesh, config: RegistrationConfig = DEFAULT_REGISTRATION) -> IntrinsicRegistration:
    """
    Registers a raw mesh into its intrinsic nose-based frame.

    extract_roi -> find_symmetry_plane -> detect_nose_features. The intrinsic
    x axis is the plane normal, the y axis is the bridge direction tilted by
    bridge_pitch_deg toward the sensor inside the plane, z = x × y, and the
    nose tip is the origin.

    Raises:
        FTypeError (fexception):
        \t\\- The object value '{mesh}' is not an instance of the required class(es) or subclass(es).
        EmptyRoi, NoConvergence, NoNoseFound:
        \t\\- Propagated from the stages.

    Returns:
        IntrinsicRegistration:
        \t\\- The registration.
    """
    logger = _debug_entry(__name__, get_function_name())

    type_check(value=mesh, required_type=TriMesh, tb_remove_name="register")
    type_check(value=config, required_type=RegistrationConfig, tb_remove_name="register")

    logger.debug("Passing parameters:\n" f"  - mesh (TriMesh):\n        - {mesh.n_vertices} vertices\n")

    roi = extract_roi(mesh, config)
    plane = find_symmetry_plane(roi, config)
    nose_tip, bridge_slope = detect_nose_features(roi, plane, config)

    frame = _plane_frame(plane.normal)
    angle = bridge_slope + math.radians(config.bridge_pitch_deg)
    x_axis = frame[:, 0]
    y_axis = math.cos(angle) * frame[:, 1] + math.sin(angle) * frame[:, 2]
    z_axis = np.cross(x_axis, y_axis)
    rotation = np.stack([x_axis, y_axis, z_axis], axis=0)
    transform = RigidTransform(rotation, -rotation @ nose_tip)

    registration = IntrinsicRegistration(transform, nose_tip, plane.residual, bridge_slope, plane)
    logger.debug(f"Returning value(s):\n  - Return = {transform.to_dict()}, residual {plane.residual:.3f} mm")
    return registration


def rasterize(mesh: TriMesh, reg: IntrinsicRegistration, grid: GridSpec = DEFAULT_GRID) -> DepthMap:
    """
    Samples a registered mesh on the depth grid.

    The mesh is moved into the intrinsic frame and every cell center takes the
    linearly interpolated depth of the frontmost triangle covering it
    (inclusive edges). Uncovered cells are HOLE. No inpainting is done.
    A point cloud (no faces) gives each cell the inverse-distance depth of
    the nearest vertices within one cell or point spacing.

    Args:
        mesh (TriMesh):
        \t\\- The raw mesh.
        reg (IntrinsicRegistration):
        \t\\- Its registration. IntrinsicRegistration.identity() for meshes already in the frame.
        grid (GridSpec, optional):
        \t\\- Grid geometry. Defaults to 120x120 cells of 1.5 mm, x in [-90, 90), y in [-70, 110).

    Raises:
        FTypeError (fexception):
        \t\\- The object value '{mesh}' is not an instance of the required class(es) or subclass(es).
        EmptyProjection:
        \t\\- No grid cell is covered by the mesh.

    Returns:
        DepthMap:
        \t\\- The depth map.
    """
    logger = _debug_entry(__name__, get_function_name())

    type_check(value=mesh, required_type=TriMesh, tb_remove_name="rasterize")
    type_check(value=reg, required_type=IntrinsicRegistration, tb_remove_name="rasterize")
    type_check(value=grid, required_type=GridSpec, tb_remove_name="rasterize")

    logger.debug(
        "Passing parameters:\n"
        f"  - mesh (TriMesh):\n        - {mesh.n_vertices} vertices, {mesh.n_faces} faces\n"
        f"  - grid (GridSpec):\n        - {grid.to_dict()}\n"
    )

    cells = _rasterize_vertices(reg.transform.apply(mesh.vertices), mesh.faces, grid, mesh.valid)
    if np.all(np.isnan(cells)):
        exc_args = {
            "main_message": "No grid cell is covered by the mesh.",
            "custom_type": EmptyProjection,
            "expected_result": "at least one covered cell",
            "returned_result": f"{mesh.n_faces} faces, grid {grid.to_dict()}",
            "suggested_resolution": "Check the registration and that the grid spans the registered face.",
        }
        raise EmptyProjection(FCustomException(message_args=exc_args, tb_remove_name="rasterize"))
    depth_map = DepthMap(grid, cells)
    logger.debug(f"Returning value(s):\n  - Return = DepthMap with {depth_map.n_valid} valid cells")
    return depth_map


def register_and_rasterize(
    mesh: TriMesh, config: RegistrationConfig = DEFAULT_REGISTRATION, grid: GridSpec = DEFAULT_GRID
) -> Tuple[IntrinsicRegistration, DepthMap]:
    registration = register(mesh, config)
    return registration, rasterize(mesh, registration, grid)


def register_batch(
    meshes: Sequence[TriMesh],
    config: RegistrationConfig = DEFAULT_REGISTRATION,
    grid: GridSpec = DEFAULT_GRID,
    workers: int = 1,
) -> List[Tuple[IntrinsicRegistration, DepthMap]]:
    """Registers and rasterizes many meshes, results in input order."""
    logger = logging.getLogger(__name__)
    logger.info(f"Registering {len(meshes)} meshes with {workers} worker(s)")
    return map_ordered(lambda mesh: register_and_rasterize(mesh, config, grid), list(meshes), workers)
