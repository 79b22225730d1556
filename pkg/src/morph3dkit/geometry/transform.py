"""
Rigid transforms in millimeters.

A transform maps a point p to R·p + t. The rotation is checked to be
orthonormal with determinant +1 within 1e-9 when constructed.
"""
# Built-in/Generic Imports
import logging
from dataclasses import dataclass
from typing import Sequence

# Libraries
import numpy as np
from scipy.spatial.transform import Rotation
from fchecker.type import type_check

# Local Functions
from ..helpers.py_helper import get_function_name

# Exceptions
from fexception import FCustomException
from .exceptions import InvalidGeometry

__author__ = "IncognitoCoding"
__copyright__ = "Copyright 2022, transform"
__credits__ = ["IncognitoCoding"]
__license__ = "MIT"
__version__ = "0.3"
__maintainer__ = "IncognitoCoding"
__status__ = "Production"

ORTHONORMAL_TOLERANCE = 1e-9


@dataclass(frozen=True, eq=False)
class RigidTransform:
    """
    Immutable rigid transform.

    Attributes:
        rotation (np.ndarray):
        \t\\- 3x3 orthonormal rotation matrix with determinant +1.
        translation (np.ndarray):
        \t\\- 3-vector translation in millimeters.
    """

    rotation: np.ndarray
    translation: np.ndarray

    def __post_init__(self) -> None:
        rotation = np.array(self.rotation, dtype=np.float64)
        translation = np.array(self.translation, dtype=np.float64).reshape(-1)
        if rotation.shape != (3, 3) or translation.shape != (3,):
            exc_args = {
                "main_message": "The rigid transform has the wrong shape.",
                "custom_type": InvalidGeometry,
                "expected_result": "rotation (3, 3) and translation (3,)",
                "returned_result": f"rotation {rotation.shape} and translation {translation.shape}",
            }
            raise InvalidGeometry(FCustomException(message_args=exc_args, tb_remove_name="__post_init__"))
        if not (np.all(np.isfinite(rotation)) and np.all(np.isfinite(translation))):
            exc_args = {
                "main_message": "The rigid transform contains non-finite values.",
                "custom_type": InvalidGeometry,
                "suggested_resolution": "Check the transform source for NaN or infinite values.",
            }
            raise InvalidGeometry(FCustomException(message_args=exc_args, tb_remove_name="__post_init__"))
        orthonormal_error = float(np.max(np.abs(rotation.T @ rotation - np.eye(3))))
        determinant = float(np.linalg.det(rotation))
        if orthonormal_error > ORTHONORMAL_TOLERANCE or abs(determinant - 1.0) > ORTHONORMAL_TOLERANCE:
            exc_args = {
                "main_message": "The rotation matrix is not a proper rotation.",
                "custom_type": InvalidGeometry,
                "expected_result": f"orthonormal with determinant +1 within {ORTHONORMAL_TOLERANCE}",
                "returned_result": f"orthonormal error {orthonormal_error}, determinant {determinant}",
            }
            raise InvalidGeometry(FCustomException(message_args=exc_args, tb_remove_name="__post_init__"))
        rotation.setflags(write=False)
        translation.setflags(write=False)
        object.__setattr__(self, "rotation", rotation)
        object.__setattr__(self, "translation", translation)

    @classmethod
    def identity(cls) -> "RigidTransform":
        return cls(np.eye(3), np.zeros(3))

    @classmethod
    def from_euler(
        cls,
        yaw_deg: float = 0.0,
        pitch_deg: float = 0.0,
        roll_deg: float = 0.0,
        translation: Sequence[float] = (0.0, 0.0, 0.0),
    ) -> "RigidTransform":
        """
        Builds a transform from face-oriented Euler angles.

        Yaw turns about the vertical y axis, pitch about the lateral x axis and roll
        about the depth z axis, applied in that order.
        """
        rotation = Rotation.from_euler("yxz", [yaw_deg, pitch_deg, roll_deg], degrees=True).as_matrix()
        return cls(rotation, np.asarray(translation, dtype=np.float64))

    def apply(self, points: np.ndarray) -> np.ndarray:
        """Maps an (N, 3) point array (or a single 3-vector) through the transform."""
        points = np.asarray(points, dtype=np.float64)
        return points @ self.rotation.T + self.translation

    def inverse(self) -> "RigidTransform":
        return RigidTransform(self.rotation.T, -self.rotation.T @ self.translation)

    @property
    def rotation_angle_deg(self) -> float:
        """Total rotation angle in degrees."""
        return float(np.degrees(Rotation.from_matrix(self.rotation).magnitude()))

    def is_identity(self, tolerance: float = 1e-9) -> bool:
        return bool(
            np.max(np.abs(self.rotation - np.eye(3))) <= tolerance and np.max(np.abs(self.translation)) <= tolerance
        )

    def to_dict(self) -> dict:
        return {"rotation": self.rotation.tolist(), "translation": self.translation.tolist()}


def compose(a: RigidTransform, b: RigidTransform) -> RigidTransform:
    """
    Composes two rigid transforms.

    Applying the returned transform equals applying b first and then a.

    Args:
        a (RigidTransform):
        \t\\- The transform applied second.
        b (RigidTransform):
        \t\\- The transform applied first.

    Raises:
        FTypeError (fexception):
        \t\\- The object value '{a}' is not an instance of the required class(es) or subclass(es).
        FTypeError (fexception):
        \t\\- The object value '{b}' is not an instance of the required class(es) or subclass(es).

    Returns:
        RigidTransform:
        \t\\- a ∘ b
    """
    logger = logging.getLogger(__name__)
    logger.debug(f"=" * 20 + get_function_name() + "=" * 20)
    # Custom flowchart tracking. This is ideal for large projects that move a lot.
    # For any third-party modules, set the flow before making the function call.
    logger_flowchart = logging.getLogger("flowchart")
    logger_flowchart.debug(f"Flowchart --> Function: {get_function_name()}")

    type_check(value=a, required_type=RigidTransform, tb_remove_name="compose")
    type_check(value=b, required_type=RigidTransform, tb_remove_name="compose")

    composed = RigidTransform(a.rotation @ b.rotation, a.rotation @ b.translation + a.translation)
    logger.debug(f"Returning value(s):\n  - Return = {composed.to_dict()}")
    return composed
