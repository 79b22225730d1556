"""
This script is used to test the thread_director module using pytest.
"""
# Built-in/Generic Imports
import time
import threading

# Libraries
import pytest

# Local Functions
from morph3dkit import map_ordered


__author__ = "IncognitoCoding"
__copyright__ = "Copyright 2022, test_thread_director"
__credits__ = ["IncognitoCoding"]
__license__ = "MIT"
__version__ = "0.3"
__maintainer__ = "IncognitoCoding"
__status__ = "Production"


def _slow_square(value: int) -> int:
    # Later items finish first.
    time.sleep(0.001 * (10 - value))
    return value * value


def _fail_on_odd(value: int) -> int:
    if value % 2:
        raise ValueError(f"odd {value}")
    return value


# ############################################################
# ######Section Test Part 1 (Successful Value Checking)#######
# ############################################################


def test_1_map_ordered():
    """Tests results keep the input order for every worker count."""
    expected = [value * value for value in range(10)]
    for workers in (1, 2, 4, 16):
        assert map_ordered(_slow_square, range(10), workers) == expected


def test_1_1_map_ordered():
    """Tests the pool runs on named worker threads."""
    names = map_ordered(lambda _: threading.current_thread().name, range(6), workers=3)
    assert all(name.startswith("map_ordered_") for name in names)
    assert map_ordered(lambda _: threading.current_thread().name, [0], workers=3) == [threading.current_thread().name]


def test_1_2_map_ordered():
    """Tests an empty item list."""
    assert map_ordered(_slow_square, [], workers=4) == []


# ############################################################
# ######Section Test Part 2 (Error/Catch Value Checking)######
# ############################################################


def test_2_map_ordered():
    """Tests the failure of the lowest item index is raised unchanged."""
    for workers in (1, 3):
        with pytest.raises(ValueError) as excinfo:
            map_ordered(_fail_on_odd, range(8), workers)
        assert str(excinfo.value) == "odd 1"


def test_2_1_map_ordered():
    """Tests an invalid worker count."""
    with pytest.raises(Exception) as excinfo:
        map_ordered(_slow_square, range(3), 0)
    assert """The worker count must be at least 1.""" in str(excinfo.value)


def test_2_2_map_ordered():
    """Tests an incorrect worker count type."""
    with pytest.raises(Exception) as excinfo:
        map_ordered(_slow_square, range(3), "2")
    assert """The object value '2' is not an instance of the required class(es) or subclass(es).""" in str(
        excinfo.value
    )
