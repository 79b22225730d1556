"""
This module is designed to assist with file-related actions.
"""
# Built-in/Generic Imports
import os
import json
import logging
from typing import Any, Dict, Sequence

# Libraries
import numpy as np
from fchecker.type import type_check
from fchecker.file import file_check

# Local Functions
from ..helpers.py_helper import get_function_name

# Exceptions
from fexception import FCustomException
from .exceptions import ModelFormatFailure

__author__ = "IncognitoCoding"
__copyright__ = "Copyright 2022, file_director"
__credits__ = ["IncognitoCoding"]
__license__ = "MIT"
__version__ = "3.8"
__maintainer__ = "IncognitoCoding"
__status__ = "Production"


class FileWriteFailure(Exception):
    """Exception raised for file write failures."""

    __module__ = "builtins"
    pass


def write_text_file(file_path: str, write_value: str) -> None:
    """
    Writes a text artifact, replacing any previous content.

    Write validation is performed after the write by reading the file back.
    Parent directories are created when missing.

    Args:
        file_path (str):
        \t\\- The file path being written into.
        write_value (str):
        \t\\- The full file content.

    Raises:
        FTypeError (fexception):
        \t\\- The object value '{file_path}' is not an instance of the required class(es) or subclass(es).
        FTypeError (fexception):
        \t\\- The object value '{write_value}' is not an instance of the required class(es) or subclass(es).
        FileWriteFailure:
        \t\\- The file failed to write.
        FileWriteFailure:
        \t\\- Writing to file ({file_path}) did not complete.
    """
    logger = logging.getLogger(__name__)
    logger.debug(f"=" * 20 + get_function_name() + "=" * 20)
    # Custom flowchart tracking. This is ideal for large projects that move a lot.
    # For any third-party modules, set the flow before making the function call.
    logger_flowchart = logging.getLogger("flowchart")
    logger_flowchart.debug(f"Flowchart --> Function: {get_function_name()}")

    type_check(value=file_path, required_type=str, tb_remove_name="write_text_file")
    type_check(value=write_value, required_type=str, tb_remove_name="write_text_file")

    logger.debug(
        "Passing parameters:\n"
        f"  - file_path (str):\n        - {file_path}\n"
        f"  - write_value (str):\n        - {len(write_value)} characters\n"
    )

    try:
        parent = os.path.dirname(os.path.abspath(file_path))
        os.makedirs(parent, exist_ok=True)
        # newline="" keeps the bytes identical across platforms.
        with open(file_path, "w", encoding="utf-8", newline="") as f:
            f.write(write_value)
    except OSError as exc:
        exc_args = {
            "main_message": "The file failed to write.",
            "custom_type": FileWriteFailure,
            "original_exception": exc,
            "returned_result": file_path,
        }
        raise FileWriteFailure(FCustomException(message_args=exc_args, tb_remove_name="write_text_file"))
    else:
        with open(file_path, "r", encoding="utf-8", newline="") as f:
            written = f.read()
        if written != write_value:
            exc_args = {
                "main_message": f"Writing to file ({file_path}) did not complete.",
                "custom_type": FileWriteFailure,
                "expected_result": f"{len(write_value)} characters",
                "returned_result": f"{len(written)} characters",
            }
            raise FileWriteFailure(FCustomException(message_args=exc_args, tb_remove_name="write_text_file"))


def write_json_file(file_path: str, data: Any) -> None:
    """Writes data as sorted, indented JSON so equal data gives byte-identical files."""
    write_text_file(file_path, json.dumps(data, indent=2, sort_keys=True) + "\n")


def write_model_file(file_path: str, kind: str, format_version: int, arrays: Dict[str, np.ndarray]) -> None:
    """
    Writes a model container (.npz) tagged with its kind and format version.

    Args:
        file_path (str):
        \t\\- The container path.
        kind (str):
        \t\\- The model kind stored with the arrays (ex: shape_model).
        format_version (int):
        \t\\- The container format version.
        arrays (Dict[str, np.ndarray]):
        \t\\- Named arrays.

    Raises:
        FTypeError (fexception):
        \t\\- The object value '{file_path}' is not an instance of the required class(es) or subclass(es).
        FileWriteFailure:
        \t\\- The model file failed to write.
    """
    logger = logging.getLogger(__name__)
    logger.debug(f"=" * 20 + get_function_name() + "=" * 20)
    # Custom flowchart tracking. This is ideal for large projects that move a lot.
    # For any third-party modules, set the flow before making the function call.
    logger_flowchart = logging.getLogger("flowchart")
    logger_flowchart.debug(f"Flowchart --> Function: {get_function_name()}")

    type_check(value=file_path, required_type=str, tb_remove_name="write_model_file")
    type_check(value=kind, required_type=str, tb_remove_name="write_model_file")
    type_check(value=format_version, required_type=int, tb_remove_name="write_model_file")
    type_check(value=arrays, required_type=dict, tb_remove_name="write_model_file")

    logger.debug(
        "Passing parameters:\n"
        f"  - file_path (str):\n        - {file_path}\n"
        f"  - kind (str):\n        - {kind}\n"
        f"  - format_version (int):\n        - {format_version}\n"
        f"  - arrays (dict):\n        - {sorted(arrays)}\n"
    )

    try:
        parent = os.path.dirname(os.path.abspath(file_path))
        os.makedirs(parent, exist_ok=True)
        with open(file_path, "wb") as f:
            np.savez(f, kind=np.array(kind), format_version=np.array(format_version), **arrays)
    except OSError as exc:
        exc_args = {
            "main_message": "The model file failed to write.",
            "custom_type": FileWriteFailure,
            "original_exception": exc,
            "returned_result": file_path,
        }
        raise FileWriteFailure(FCustomException(message_args=exc_args, tb_remove_name="write_model_file"))


def read_model_file(file_path: str, kind: str, format_version: int, required: Sequence[str]) -> Dict[str, np.ndarray]:
    """
    Reads a model container written by write_model_file.

    Args:
        file_path (str):
        \t\\- The container path.
        kind (str):
        \t\\- The expected model kind.
        format_version (int):
        \t\\- The supported format version.
        required (Sequence[str]):
        \t\\- Array names that must be present.

    Raises:
        FTypeError (fexception):
        \t\\- The object value '{file_path}' is not an instance of the required class(es) or subclass(es).
        FFileNotFoundError (fexception):
        \t\\- The file does not exist.
        ModelFormatFailure:
        \t\\- The model file is not a readable container.
        ModelFormatFailure:
        \t\\- The model file holds a different model kind or format version.
        ModelFormatFailure:
        \t\\- The model file is missing arrays.

    Returns:
        Dict[str, np.ndarray]:
        \t\\- The stored arrays, without the kind and version tags.
    """
    logger = logging.getLogger(__name__)
    logger.debug(f"=" * 20 + get_function_name() + "=" * 20)
    # Custom flowchart tracking. This is ideal for large projects that move a lot.
    # For any third-party modules, set the flow before making the function call.
    logger_flowchart = logging.getLogger("flowchart")
    logger_flowchart.debug(f"Flowchart --> Function: {get_function_name()}")

    type_check(value=file_path, required_type=str, tb_remove_name="read_model_file")
    type_check(value=kind, required_type=str, tb_remove_name="read_model_file")

    logger.debug(
        "Passing parameters:\n"
        f"  - file_path (str):\n        - {file_path}\n"
        f"  - kind (str):\n        - {kind}\n"
        f"  - format_version (int):\n        - {format_version}\n"
    )

    file_check(file_path)
    try:
        with np.load(file_path, allow_pickle=False) as container:
            arrays = {name: container[name] for name in container.files}
    except (OSError, ValueError) as exc:
        exc_args = {
            "main_message": "The model file is not a readable container.",
            "custom_type": ModelFormatFailure,
            "original_exception": exc,
            "returned_result": file_path,
        }
        raise ModelFormatFailure(FCustomException(message_args=exc_args, tb_remove_name="read_model_file"))

    stored_kind = str(arrays.pop("kind", ""))
    stored_version = int(arrays.pop("format_version", -1))
    if stored_kind != kind or stored_version != format_version:
        exc_args = {
            "main_message": "The model file holds a different model kind or format version.",
            "custom_type": ModelFormatFailure,
            "expected_result": f"{kind} v{format_version}",
            "returned_result": f"{stored_kind or 'unknown'} v{stored_version}",
        }
        raise ModelFormatFailure(FCustomException(message_args=exc_args, tb_remove_name="read_model_file"))
    missing = [name for name in required if name not in arrays]
    if missing:
        exc_args = {
            "main_message": "The model file is missing arrays.",
            "custom_type": ModelFormatFailure,
            "expected_result": list(required),
            "returned_result": f"missing {missing}",
        }
        raise ModelFormatFailure(FCustomException(message_args=exc_args, tb_remove_name="read_model_file"))

    logger.debug(f"Returning value(s):\n  - Return = {sorted(arrays)}")
    return arrays
