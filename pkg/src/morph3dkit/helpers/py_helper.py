"""
This module is designed to help retrieve python information.
The module only contains short, simple, helpful python helper functions.
No error checking or logging is done on these functions because they are only used to build log output.
"""
# Built-in/Generic Imports
import inspect
from types import FrameType
from typing import Any, cast

# Libraries
import numpy as np

__author__ = "IncognitoCoding"
__copyright__ = "Copyright 2022, py_helper"
__credits__ = ["IncognitoCoding"]
__license__ = "MIT"
__version__ = "2.1"
__maintainer__ = "IncognitoCoding"
__status__ = "Production"


def get_function_name() -> str:
    """Return the calling function's name."""
    return cast(FrameType, cast(FrameType, inspect.currentframe()).f_back).f_code.co_name


def summarize_value(value: Any) -> str:
    """
    Returns a short log-friendly description of a value.

    numpy arrays are reduced to shape, dtype and finite count so debug logs
    stay readable for depth maps and vertex arrays.
    """
    if isinstance(value, np.ndarray):
        if np.issubdtype(value.dtype, np.number):
            finite = int(np.count_nonzero(np.isfinite(value)))
            return f"ndarray(shape={value.shape}, dtype={value.dtype}, finite={finite})"
        return f"ndarray(shape={value.shape}, dtype={value.dtype})"
    if isinstance(value, (list, tuple)) and len(value) > 8:
        return f"{type(value).__name__}(len={len(value)})"
    return str(value)
