# Built-in/Generic Imports
import pytest

# Libraries
import numpy as np

# Local Functions
from morph3dkit import RigidTransform, compose


__author__ = "IncognitoCoding"
__copyright__ = "Copyright 2022, test_transform"
__credits__ = ["IncognitoCoding"]
__license__ = "MIT"
__version__ = "0.2"
__maintainer__ = "IncognitoCoding"
__status__ = "Production"


# ############################################################
# ######Section Test Part 1 (Successful Value Checking)#######
# ############################################################


def test_1_rigid_transform():
    """Tests the identity transform leaves points unchanged."""
    points = np.array([[1.0, 2.0, 3.0], [-4.0, 0.5, 9.0]])
    identity = RigidTransform.identity()
    assert identity.is_identity()
    assert np.allclose(identity.apply(points), points)


def test_1_1_rigid_transform():
    """Tests the inverse undoes the transform."""
    t = RigidTransform.from_euler(yaw_deg=12.0, pitch_deg=-5.0, roll_deg=3.0, translation=(4.0, -2.0, 7.5))
    points = np.array([[10.0, 20.0, 30.0], [0.0, 0.0, 0.0]])
    assert np.allclose(t.inverse().apply(t.apply(points)), points, atol=1e-9)
    assert t.rotation_angle_deg > 0.0


def test_1_2_rigid_transform():
    """Tests the transform arrays are read-only."""
    t = RigidTransform.identity()
    with pytest.raises(ValueError):
        t.rotation[0, 0] = 2.0


def test_1_compose():
    """Tests compose(a, b) applies b first and a second."""
    a = RigidTransform.from_euler(yaw_deg=20.0, translation=(1.0, 0.0, 0.0))
    b = RigidTransform.from_euler(roll_deg=-8.0, translation=(0.0, 3.0, -1.0))
    points = np.array([[5.0, -3.0, 2.0]])
    assert np.allclose(compose(a, b).apply(points), a.apply(b.apply(points)))


def test_1_1_compose():
    """Tests composing with the inverse gives the identity."""
    t = RigidTransform.from_euler(yaw_deg=-30.0, pitch_deg=10.0, translation=(2.0, 2.0, 2.0))
    assert compose(t, t.inverse()).is_identity(tolerance=1e-9)


# ############################################################
# ######Section Test Part 2 (Error/Catch Value Checking)######
# ############################################################


def test_2_rigid_transform():
    """Tests a non-orthonormal rotation is rejected."""
    with pytest.raises(Exception) as excinfo:
        RigidTransform(np.diag([1.0, 1.0, 2.0]), np.zeros(3))
    assert """The rotation matrix is not a proper rotation.""" in str(excinfo.value)


def test_2_1_rigid_transform():
    """Tests a reflection (determinant -1) is rejected."""
    with pytest.raises(Exception) as excinfo:
        RigidTransform(np.diag([1.0, 1.0, -1.0]), np.zeros(3))
    assert """The rotation matrix is not a proper rotation.""" in str(excinfo.value)


def test_2_2_rigid_transform():
    """Tests a wrong translation shape is rejected."""
    with pytest.raises(Exception) as excinfo:
        RigidTransform(np.eye(3), np.zeros(2))
    assert """The rigid transform has the wrong shape.""" in str(excinfo.value)


def test_2_compose():
    """Tests sending an invalid transform type."""
    with pytest.raises(Exception) as excinfo:
        compose(RigidTransform.identity(), "invalid Type")
    assert (
        """The object value 'invalid Type' is not an instance of the required class(es) or subclass(es)."""
        in str(excinfo.value)
    )
