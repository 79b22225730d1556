"""
This module is designed to read YAML configuration and data tables.
"""
# Built-in/Generic Imports
import logging
from importlib import resources
from typing import Any

# Libraries
import yaml
from fchecker.type import type_check
from fchecker.file import file_check

# Local Functions
from ..helpers.py_helper import get_function_name

# Exceptions
from fexception import FCustomException

__author__ = "IncognitoCoding"
__copyright__ = "Copyright 2022, yaml_director"
__credits__ = ["IncognitoCoding"]
__license__ = "MIT"
__version__ = "3.6"
__maintainer__ = "IncognitoCoding"
__status__ = "Production"

LOADERS = {
    "FullLoader": yaml.FullLoader,
    "SafeLoader": yaml.SafeLoader,
    "BaseLoader": yaml.BaseLoader,
}


class YamlReadFailure(Exception):
    """Exception raised for a YAML read failure."""

    __module__ = "builtins"
    pass


def read_yaml_config(yaml_file_path: str, loader: str = "SafeLoader") -> Any:
    """
    Reads a YAML file and returns the loaded data.

    Args:
        yaml_file_path (str):
        \t\\- YAML file path.
        loader (str, optional):
        \t\\- Loader for the YAML file. Defaults to SafeLoader.\\
        \t\t\\- loader Options:\\
        \t\t\t\\- FullLoader\\
        \t\t\t\t\\- Used for trusted YAML input (logging configurations).\\
        \t\t\t\\- SafeLoader\\
        \t\t\t\t\\- Used for experiment configurations and data tables.\\
        \t\t\t\\- BaseLoader\\
        \t\t\t\t\\- All loading is strings.

    Raises:
        FTypeError (fexception):
        \t\\- The object value '{yaml_file_path}' is not an instance of the required class(es) or subclass(es).
        FTypeError (fexception):
        \t\\- The object value '{loader}' is not an instance of the required class(es) or subclass(es).
        FFileNotFoundError (fexception):
        \t\\- The file does not exist.
        YamlReadFailure:
        \t\\- Incorrect YAML loader parameter.
        YamlReadFailure:
        \t\\- A failure occurred while reading the YAML file.

    Returns:
        Any:
        \t\\- The YAML document.
    """
    logger = logging.getLogger(__name__)
    logger.debug(f"=" * 20 + get_function_name() + "=" * 20)
    # Custom flowchart tracking. This is ideal for large projects that move a lot.
    # For any third-party modules, set the flow before making the function call.
    logger_flowchart = logging.getLogger("flowchart")
    logger_flowchart.debug(f"Flowchart --> Function: {get_function_name()}")

    type_check(value=yaml_file_path, required_type=str, tb_remove_name="read_yaml_config")
    type_check(value=loader, required_type=str, tb_remove_name="read_yaml_config")

    logger.debug(
        "Passing parameters:\n"
        f"  - yaml_file_path (str):\n        - {yaml_file_path}\n"
        f"  - loader (str):\n        - {loader}\n"
    )

    if loader not in LOADERS:
        exc_args = {
            "main_message": "Incorrect YAML loader parameter.",
            "custom_type": YamlReadFailure,
            "expected_result": list(LOADERS),
            "returned_result": loader,
        }
        raise YamlReadFailure(FCustomException(message_args=exc_args, tb_remove_name="read_yaml_config"))
    file_check(yaml_file_path)

    try:
        with open(yaml_file_path, "r", encoding="utf-8") as file:
            config = yaml.load(file, Loader=LOADERS[loader])
    except yaml.YAMLError as exc:
        exc_args = {
            "main_message": "A failure occurred while reading the YAML file.",
            "custom_type": YamlReadFailure,
            "original_exception": exc,
            "returned_result": yaml_file_path,
            "suggested_resolution": "Please verify the YAML punctuation and indentation.",
        }
        raise YamlReadFailure(FCustomException(message_args=exc_args, tb_remove_name="read_yaml_config"))
    else:
        logger.debug(f"Returning value(s):\n  - Return = {type(config).__name__} from {yaml_file_path}")
        return config


def read_package_yaml(resource_name: str) -> Any:
    """Reads a YAML table shipped in the morph3dkit.data package."""
    with resources.as_file(resources.files("morph3dkit") / "data" / resource_name) as path:
        return read_yaml_config(str(path), "SafeLoader")
