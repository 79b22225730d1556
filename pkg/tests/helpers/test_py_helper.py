"""
This script is used to test the py_helper and sort_helper modules using pytest.

Run: py.test to validate.
"""
# Libraries
import numpy as np

# Local Functions
from morph3dkit import get_function_name, summarize_value, id_sort_key


def test_get_function_name():
    """
    This function tests returning the calling function name.
    """
    print("")
    print("-" * 65)
    print("-" * 65)
    print("Testing Function: get_function_name")
    print("-" * 65)
    print("-" * 65)
    print("")
    # ############################################################
    # ######Section Test Part 1 (Successful Value Checking)#######
    # ############################################################
    # ========Tests for a successful output return.========
    assert get_function_name() == "test_get_function_name"


def test_summarize_value():
    """
    This function tests the log-friendly value summary.
    """
    print("")
    print("-" * 65)
    print("-" * 65)
    print("Testing Function: summarize_value")
    print("-" * 65)
    print("-" * 65)
    print("")
    # ############################################################
    # ######Section Test Part 1 (Successful Value Checking)#######
    # ############################################################
    # ========Tests for a successful output return.========
    cells = np.full((4, 5), np.nan)
    cells[0, :3] = 1.0
    assert summarize_value(cells) == "ndarray(shape=(4, 5), dtype=float64, finite=3)"
    assert summarize_value(list(range(20))) == "list(len=20)"
    assert summarize_value([1, 2]) == "[1, 2]"


def test_id_sort_key():
    """
    This function tests natural ordering of subject and sample ids.
    """
    print("")
    print("-" * 65)
    print("-" * 65)
    print("Testing Function: id_sort_key")
    print("-" * 65)
    print("-" * 65)
    print("")
    # ############################################################
    # ######Section Test Part 1 (Successful Value Checking)#######
    # ############################################################
    # ========Tests for a successful output return.========
    ids = ["s10_1", "s2_0", "s2_10", "s2_2"]
    assert sorted(ids, key=id_sort_key) == ["s2_0", "s2_2", "s2_10", "s10_1"]
