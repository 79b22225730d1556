"""
This module is designed to generate deterministic synthetic face populations.

Each subject is an analytic heightfield (ellipsoidal dome, nose ridge, eye
sockets, brow, cheeks and lips) triangulated on a regular lateral lattice.
Samples add a rigid pose offset, surface noise and a small expression warp.
Subject parameters depend only on (seed, subject id) so subjects can be
generated in any order.
"""
# Built-in/Generic Imports
import os
import zlib
import logging
from dataclasses import dataclass, asdict, fields
from typing import Dict, Iterator, List, NamedTuple, Optional, Tuple

# Libraries
import numpy as np
from scipy.spatial.transform import Rotation
from fchecker.type import type_check

# Local Functions
from ..helpers.py_helper import get_function_name
from ..geometry.mesh import TriMesh, apply_transform, grid_triangulation
from ..geometry.transform import RigidTransform
from .mesh_io_director import write_mesh
from .file_director import write_json_file

# Exceptions
from fexception import FCustomException
from .exceptions import InvalidConfig

__author__ = "IncognitoCoding"
__copyright__ = "Copyright 2022, synth_director"
__credits__ = ["IncognitoCoding"]
__license__ = "MIT"
__version__ = "1.1"
__maintainer__ = "IncognitoCoding"
__status__ = "Production"


class UnknownId(Exception):
    """Exception raised when a subject or sample id is not part of the population."""

    __module__ = "builtins"
    pass


# Generator bounds in millimeters, (low, high) per SubjectParams field.
PARAM_BOUNDS: Dict[str, Tuple[float, float]] = {
    "nose_height": (14.0, 30.0),
    "nose_width": (6.0, 11.0),
    "nose_length": (34.0, 54.0),
    "brow_prominence": (1.0, 7.0),
    "eye_depth": (5.0, 13.0),
    "eye_spacing": (56.0, 72.0),
    "dome_rx": (64.0, 76.0),
    "dome_ry": (80.0, 92.0),
    "dome_rz": (42.0, 60.0),
    "cheek_height": (2.0, 8.0),
    "cheek_asymmetry": (-1.5, 1.5),
}
# Fixed layout constants of the canonical face (millimeters).
DOME_CENTER_Y = 8.0
FACE_EXTENT = 0.95
NOSE_BASE_LENGTH = 14.0
EYE_HEIGHT = 28.0
EYE_SIGMA = (11.0, 7.0)
EYE_HOLE_AXES = (7.0, 4.5)
BROW_HEIGHT = 40.0
CHEEK_CENTER = (40.0, -12.0)
CHEEK_SIGMA = 14.0
MOUTH_HEIGHT = -42.0
LATTICE_STEP = 1.5
LATTICE_X = (-75.0, 75.0)
LATTICE_Y = (-82.5, 103.5)


@dataclass(frozen=True)
class SubjectParams:
    """Identity shape parameters of one synthetic subject, in millimeters."""

    subject_id: str
    nose_height: float
    nose_width: float
    nose_length: float
    brow_prominence: float
    eye_depth: float
    eye_spacing: float
    dome_rx: float
    dome_ry: float
    dome_rz: float
    cheek_height: float
    cheek_asymmetry: float


@dataclass(frozen=True)
class SampleNoise:
    """
    Per-sample acquisition variation.

    Attributes:
        max_rotation_deg (float):
        \t\\- Upper bound of the random pose rotation angle.
        max_translation_mm (float):
        \t\\- Upper bound of each translation component.
        sigma_mm (float):
        \t\\- Additive surface noise standard deviation.
        expression_mm (float):
        \t\\- Amplitude of the mouth and brow expression warp.
        eye_holes (bool):
        \t\\- Marks eye-socket vertices invalid when True.
    """

    max_rotation_deg: float = 6.0
    max_translation_mm: float = 15.0
    sigma_mm: float = 0.25
    expression_mm: float = 1.0
    eye_holes: bool = True

    def __post_init__(self) -> None:
        if (
            self.sigma_mm < 0
            or self.max_rotation_deg < 0
            or self.max_rotation_deg > 180
            or self.max_translation_mm < 0
            or self.expression_mm < 0
        ):
            exc_args = {
                "main_message": "The sample noise profile is invalid.",
                "custom_type": InvalidConfig,
                "expected_result": "non-negative sigma, translation and expression, rotation in [0, 180] degrees",
                "returned_result": asdict(self),
            }
            raise InvalidConfig(FCustomException(message_args=exc_args, tb_remove_name="__post_init__"))


NOISE_PROFILES: Dict[str, SampleNoise] = {
    "zero": SampleNoise(0.0, 0.0, 0.0, 0.0, True),
    "controlled": SampleNoise(3.0, 5.0, 0.1, 0.5, True),
    "uncontrolled": SampleNoise(6.0, 15.0, 0.25, 1.0, True),
}
DEFAULT_NOISE_PROFILE = "uncontrolled"


class SyntheticSample(NamedTuple):
    subject_id: str
    sample_id: int
    mesh: TriMesh
    nose_tip: np.ndarray
    pose: RigidTransform

    @property
    def key(self) -> str:
        return sample_key(self.subject_id, self.sample_id)


@dataclass(frozen=True, eq=False)
class SyntheticPopulation:
    """Generated samples plus the generator-side truth needed by test oracles."""

    seed: int
    noise: SampleNoise
    params: Dict[str, SubjectParams]
    samples: Tuple[SyntheticSample, ...]

    def __iter__(self) -> Iterator[SyntheticSample]:
        return iter(self.samples)

    def __len__(self) -> int:
        return len(self.samples)

    @property
    def subject_ids(self) -> List[str]:
        return list(self.params.keys())

    def get(self, subject_id: str, sample_id: int) -> SyntheticSample:
        for sample in self.samples:
            if sample.subject_id == subject_id and sample.sample_id == sample_id:
                return sample
        exc_args = {
            "main_message": "The subject or sample id is not part of the population.",
            "custom_type": UnknownId,
            "expected_result": f"one of {self.subject_ids[:5]}... with a sample id below the sample count",
            "returned_result": f"({subject_id}, {sample_id})",
        }
        raise UnknownId(FCustomException(message_args=exc_args, tb_remove_name="get"))


def sample_key(subject_id: str, sample_id: int) -> str:
    """Population-wide key of one sample, e.g. 's007_2'."""
    return f"{subject_id}_{sample_id}"


def _seed_sequence(seed: int, subject_id: str, *extra: int) -> np.random.SeedSequence:
    # crc32 is stable across interpreter runs, unlike hash().
    return np.random.SeedSequence([int(seed), zlib.crc32(subject_id.encode("utf-8")), *extra])


def subject_params(seed: int, subject_id: str) -> SubjectParams:
    """Draws the identity parameters of one subject. Same (seed, id) always gives the same parameters."""
    rng = np.random.default_rng(_seed_sequence(seed, subject_id))
    values = {name: float(rng.uniform(low, high)) for name, (low, high) in PARAM_BOUNDS.items()}
    return SubjectParams(subject_id=subject_id, **values)


def _gaussian(dx: np.ndarray, dy: np.ndarray, sigma_x: float, sigma_y: float) -> np.ndarray:
    return np.exp(-(dx**2 / (2.0 * sigma_x**2) + dy**2 / (2.0 * sigma_y**2)))


def face_mask(params: SubjectParams, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """True where (x, y) lies inside the face region of the canonical frame."""
    r2 = (np.asarray(x) / params.dome_rx) ** 2 + ((np.asarray(y) - DOME_CENTER_Y) / params.dome_ry) ** 2
    return r2 <= FACE_EXTENT**2


def eye_hole_mask(params: SubjectParams, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """True inside either eye-hole ellipse."""
    x = np.asarray(x)
    y = np.asarray(y)
    half = params.eye_spacing / 2.0
    hx, hy = EYE_HOLE_AXES
    left = ((x + half) / hx) ** 2 + ((y - EYE_HEIGHT) / hy) ** 2 <= 1.0
    right = ((x - half) / hx) ** 2 + ((y - EYE_HEIGHT) / hy) ** 2 <= 1.0
    return left | right


def face_surface(
    params: SubjectParams, x: np.ndarray, y: np.ndarray, expression: Tuple[float, float] = (0.0, 0.0)
) -> np.ndarray:
    """
    Evaluates the canonical heightfield z(x, y) of a subject.

    The nose ridge peaks at (0, 0): it rises linearly over NOSE_BASE_LENGTH below
    the tip and falls linearly over nose_length above it, so the tip is the apex
    of the ridge.

    Args:
        params (SubjectParams):
        \t\\- Identity parameters.
        x, y (np.ndarray):
        \t\\- Lateral coordinates in millimeters.
        expression (Tuple[float, float], optional):
        \t\\- (mouth, brow) warp amplitudes in millimeters. Defaults to neutral.

    Returns:
        np.ndarray:
        \t\\- Depth in millimeters, same shape as x.
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    r2 = (x / params.dome_rx) ** 2 + ((y - DOME_CENTER_Y) / params.dome_ry) ** 2
    dome = params.dome_rz * np.sqrt(np.clip(1.0 - r2, 0.0, None))

    ridge = np.where(
        y >= 0.0, np.clip(1.0 - y / params.nose_length, 0.0, None), np.clip(1.0 + y / NOSE_BASE_LENGTH, 0.0, None)
    )
    nose = params.nose_height * ridge * np.exp(-(x**2) / (2.0 * params.nose_width**2))

    brow = (
        params.brow_prominence
        * np.exp(-((y - BROW_HEIGHT) ** 2) / (2.0 * 6.0**2))
        * (np.exp(-((x - 22.0) ** 2) / (2.0 * 16.0**2)) + np.exp(-((x + 22.0) ** 2) / (2.0 * 16.0**2)))
    )

    half = params.eye_spacing / 2.0
    sockets = -params.eye_depth * (
        _gaussian(x - half, y - EYE_HEIGHT, *EYE_SIGMA) + _gaussian(x + half, y - EYE_HEIGHT, *EYE_SIGMA)
    )

    cx, cy = CHEEK_CENTER
    cheeks = (params.cheek_height + params.cheek_asymmetry) * _gaussian(
        x - cx, y - cy, CHEEK_SIGMA, CHEEK_SIGMA
    ) + (params.cheek_height - params.cheek_asymmetry) * _gaussian(x + cx, y - cy, CHEEK_SIGMA, CHEEK_SIGMA)

    lips = 3.0 * _gaussian(x, y - MOUTH_HEIGHT, 16.0, 5.0)

    mouth_warp, brow_warp = expression
    warp = mouth_warp * _gaussian(x, y - MOUTH_HEIGHT, 20.0, 9.0) + brow_warp * _gaussian(
        x, y - (BROW_HEIGHT + 6.0), 35.0, 7.0
    )
    return dome + nose + brow + sockets + cheeks + lips + warp


def canonical_mesh(params: SubjectParams, expression: Tuple[float, float] = (0.0, 0.0), eye_holes: bool = True) -> TriMesh:
    """Triangulates the noise-free canonical face of a subject."""
    xs = np.arange(LATTICE_X[0], LATTICE_X[1] + LATTICE_STEP / 2, LATTICE_STEP)
    ys = np.arange(LATTICE_Y[0], LATTICE_Y[1] + LATTICE_STEP / 2, LATTICE_STEP)
    grid_x, grid_y = np.meshgrid(xs, ys)
    inside = face_mask(params, grid_x, grid_y)
    valid = inside & ~eye_hole_mask(params, grid_x, grid_y) if eye_holes else inside
    z = face_surface(params, grid_x, grid_y, expression)
    lattice = TriMesh(
        np.stack([grid_x.ravel(), grid_y.ravel(), z.ravel()], axis=1), grid_triangulation(valid), valid.ravel()
    )
    return lattice.subset(inside.ravel())


def nose_apex(params: SubjectParams, expression: Tuple[float, float] = (0.0, 0.0)) -> np.ndarray:
    """Analytic nose tip in the canonical frame."""
    return np.array([0.0, 0.0, float(face_surface(params, np.array(0.0), np.array(0.0), expression))])


def _make_sample(seed: int, params: SubjectParams, sample_id: int, noise: SampleNoise) -> SyntheticSample:
    rng = np.random.default_rng(_seed_sequence(seed, params.subject_id, sample_id + 1))
    # Sample 0 is the neutral acquisition.
    if sample_id == 0:
        expression = (0.0, 0.0)
    else:
        expression = tuple(float(v) for v in rng.uniform(-1.0, 1.0, size=2) * noise.expression_mm)

    axis = rng.normal(size=3)
    axis /= np.linalg.norm(axis)
    angle = np.radians(rng.uniform(0.0, noise.max_rotation_deg))
    translation = rng.uniform(-1.0, 1.0, size=3) * noise.max_translation_mm
    pose = RigidTransform(Rotation.from_rotvec(axis * angle).as_matrix(), translation)

    canonical = canonical_mesh(params, expression, noise.eye_holes)
    vertices = np.array(canonical.vertices)
    if noise.sigma_mm > 0:
        vertices[:, 2] += rng.normal(0.0, noise.sigma_mm, size=len(vertices))
    mesh = apply_transform(TriMesh(vertices, canonical.faces, canonical.valid), pose)
    nose_tip = pose.apply(nose_apex(params, expression))
    return SyntheticSample(params.subject_id, sample_id, mesh, nose_tip, pose)


def generate_population(
    seed: int,
    n_subjects: int,
    samples_per_subject: int,
    noise: Optional[SampleNoise] = None,
    id_prefix: str = "s",
) -> SyntheticPopulation:
    """
    Generates a deterministic synthetic population.

    Args:
        seed (int):
        \t\\- Population seed.
        n_subjects (int):
        \t\\- Subject count (>= 2).
        samples_per_subject (int):
        \t\\- Samples per subject (>= 1). Sample 0 carries no expression.
        noise (SampleNoise, optional):
        \t\\- Noise profile. Defaults to the uncontrolled profile.
        id_prefix (str, optional):
        \t\\- Subject id prefix. Populations with different prefixes hold different subjects.

    Raises:
        FTypeError (fexception):
        \t\\- The object value '{seed}' is not an instance of the required class(es) or subclass(es).
        InvalidConfig:
        \t\\- The population size is invalid.

    Returns:
        SyntheticPopulation:
        \t\\- Samples ordered by subject then sample id, with ground truth.
    """
    logger = logging.getLogger(__name__)
    logger.debug(f"=" * 20 + get_function_name() + "=" * 20)
    # Custom flowchart tracking. This is ideal for large projects that move a lot.
    # For any third-party modules, set the flow before making the function call.
    logger_flowchart = logging.getLogger("flowchart")
    logger_flowchart.debug(f"Flowchart --> Function: {get_function_name()}")

    type_check(value=seed, required_type=int, tb_remove_name="generate_population")
    type_check(value=n_subjects, required_type=int, tb_remove_name="generate_population")
    type_check(value=samples_per_subject, required_type=int, tb_remove_name="generate_population")
    type_check(value=id_prefix, required_type=str, tb_remove_name="generate_population")
    if noise is None:
        noise = NOISE_PROFILES[DEFAULT_NOISE_PROFILE]
    type_check(value=noise, required_type=SampleNoise, tb_remove_name="generate_population")

    logger.debug(
        "Passing parameters:\n"
        f"  - seed (int):\n        - {seed}\n"
        f"  - n_subjects (int):\n        - {n_subjects}\n"
        f"  - samples_per_subject (int):\n        - {samples_per_subject}\n"
        f"  - noise (SampleNoise):\n        - {noise}\n"
        f"  - id_prefix (str):\n        - {id_prefix}\n"
    )

    if n_subjects < 2 or samples_per_subject < 1:
        exc_args = {
            "main_message": "The population size is invalid.",
            "custom_type": InvalidConfig,
            "expected_result": "n_subjects >= 2 and samples_per_subject >= 1",
            "returned_result": f"n_subjects={n_subjects}, samples_per_subject={samples_per_subject}",
        }
        raise InvalidConfig(FCustomException(message_args=exc_args, tb_remove_name="generate_population"))

    params: Dict[str, SubjectParams] = {}
    samples: List[SyntheticSample] = []
    for index in range(n_subjects):
        subject_id = f"{id_prefix}{index:03d}"
        params[subject_id] = subject_params(seed, subject_id)
        for sample_id in range(samples_per_subject):
            samples.append(_make_sample(seed, params[subject_id], sample_id, noise))

    logger.info(f"Generated {len(samples)} synthetic samples for {n_subjects} subjects (seed {seed})")
    return SyntheticPopulation(seed=seed, noise=noise, params=params, samples=tuple(samples))


def ground_truth(population: SyntheticPopulation, subject_id: str, sample_id: int) -> Tuple[np.ndarray, RigidTransform]:
    """
    Returns the generator-side nose tip (raw frame) and applied pose of a sample.

    Raises:
        UnknownId:
        \t\\- The subject or sample id is not part of the population.
    """
    logger = logging.getLogger(__name__)
    logger.debug(f"=" * 20 + get_function_name() + "=" * 20)
    # Custom flowchart tracking. This is ideal for large projects that move a lot.
    # For any third-party modules, set the flow before making the function call.
    logger_flowchart = logging.getLogger("flowchart")
    logger_flowchart.debug(f"Flowchart --> Function: {get_function_name()}")

    type_check(value=population, required_type=SyntheticPopulation, tb_remove_name="ground_truth")
    type_check(value=subject_id, required_type=str, tb_remove_name="ground_truth")
    type_check(value=sample_id, required_type=int, tb_remove_name="ground_truth")

    sample = population.get(subject_id, sample_id)
    return np.array(sample.nose_tip), sample.pose


def export_population(population: SyntheticPopulation, directory: str) -> List[str]:
    """
    Writes every sample as a binary PLY plus a ground_truth.json holding subject parameters,
    nose tips and poses.

    Returns:
        List[str]:
        \t\\- The written mesh paths, in population order.
    """
    logger = logging.getLogger(__name__)
    logger.debug(f"=" * 20 + get_function_name() + "=" * 20)
    # Custom flowchart tracking. This is ideal for large projects that move a lot.
    # For any third-party modules, set the flow before making the function call.
    logger_flowchart = logging.getLogger("flowchart")
    logger_flowchart.debug(f"Flowchart --> Function: {get_function_name()}")

    type_check(value=population, required_type=SyntheticPopulation, tb_remove_name="export_population")
    type_check(value=directory, required_type=str, tb_remove_name="export_population")

    os.makedirs(directory, exist_ok=True)
    paths: List[str] = []
    truth: dict = {
        "seed": population.seed,
        "noise": asdict(population.noise),
        "subjects": {subject_id: asdict(p) for subject_id, p in population.params.items()},
        "samples": {},
    }
    for sample in population:
        path = os.path.join(directory, f"{sample.key}.ply")
        write_mesh(sample.mesh, path)
        paths.append(path)
        truth["samples"][sample.key] = {
            "subject_id": sample.subject_id,
            "sample_id": sample.sample_id,
            "nose_tip": sample.nose_tip.tolist(),
            "pose": sample.pose.to_dict(),
        }
    write_json_file(os.path.join(directory, "ground_truth.json"), truth)
    logger.info(f"Exported {len(paths)} meshes to {directory}")
    return paths


def noise_profile(name_or_values) -> SampleNoise:
    """Resolves a profile name or a dict of SampleNoise fields."""
    if isinstance(name_or_values, SampleNoise):
        return name_or_values
    if isinstance(name_or_values, str) and name_or_values in NOISE_PROFILES:
        return NOISE_PROFILES[name_or_values]
    if isinstance(name_or_values, dict):
        known = {f.name for f in fields(SampleNoise)}
        unknown = set(name_or_values) - known
        if not unknown:
            return SampleNoise(**name_or_values)
    exc_args = {
        "main_message": "The noise profile is not recognized.",
        "custom_type": InvalidConfig,
        "expected_result": f"one of {sorted(NOISE_PROFILES)} or a dict with keys {[f.name for f in fields(SampleNoise)]}",
        "returned_result": name_or_values,
    }
    raise InvalidConfig(FCustomException(message_args=exc_args, tb_remove_name="noise_profile"))
