"""
This module is designed to assist with log-related actions.
"""
# Built-in/Generic Imports
import os
import sys
import pathlib
import logging
import logging.config
from logging.handlers import RotatingFileHandler
from typing import Optional

# Libraries
from fchecker.type import type_check

# Local Functions
from ..helpers.py_helper import get_function_name

# Full path required to avoid partially initialized module error.
from ..directors.yaml_director import read_yaml_config

# Exceptions
from fexception import FKeyError, FCustomException

__author__ = "IncognitoCoding"
__copyright__ = "Copyright 2022, log_director"
__credits__ = ["IncognitoCoding"]
__license__ = "MIT"
__version__ = "3.7"
__maintainer__ = "IncognitoCoding"
__status__ = "Production"

LOGGER_SETTING_KEYS = [
    "save_path",
    "logger_name",
    "log_name",
    "max_bytes",
    "file_log_level",
    "console_log_level",
    "backup_count",
    "format_option",
    "handler_option",
]
FORMAT_OPTIONS = {
    1: "%(asctime)s|%(levelname)s|%(message)s (Module:%(module)s, Function:%(funcName)s,  Line:%(lineno)s)",
    2: "%(message)s",
}


class LoggerSetupFailure(Exception):
    """Exception raised for a logger setup failure."""

    __module__ = "builtins"
    pass


def create_logger(logger_settings: dict) -> logging.Logger:
    """
    Creates a console and/or rotating file logger from a settings dictionary.

    The command line uses this with handler_option 3 when no logging YAML is given.\\
    Calling it again for a logger that already has handlers returns the existing logger\\
    so repeated runs in one process do not duplicate entries.

    Args:
        logger_settings (dict):
        \t\\- formatted dictionary containing all the logger settings.

    Arg Keys:
        logger_settings Keys:\\
        \t\\- save_path (str):\\
        \t\t\\- log file directory (unused with handler_option 3)\\
        \t\\- logger_name (str):\\
        \t\t\\- logger name (ex: morph3dkit)\\
        \t\\- log_name (str):\\
        \t\t\\- logger file name\\
        \t\\- max_bytes (int):\\
        \t\t\\- max log size in bytes\\
        \t\\- file_log_level (str):\\
        \t\t\\- file output log level\\
        \t\\- console_log_level (str):\\
        \t\t\\- console output log level\\
        \t\\- backup_count (int):\\
        \t\t\\- backup log copies\\
        \t\\- format_option (int or str):\\
        \t\t\\- options:\\
        \t\t\t 1 - time, level, message, module, function and line (Default)\\
        \t\t\t 2 - '%(message)s'\\
        \t\t\t (str) - manual format string\\
        \t\\- handler_option (int):\\
        \t\t\\- options:\\
        \t\t\t 1 - Both (Default)\\
        \t\t\t 2 - File Handler\\
        \t\t\t 3 - Console Handler

    Raises:
        FTypeError (fexception):
        \t\\- The object value '{logger_settings}' is not an instance of the required class(es) or subclass(es).
        FKeyError (fexception):
        \t\\- The logger settings dictionary is missing keys.
        LoggerSetupFailure:
        \t\\- Incorrect format_option selection.
        LoggerSetupFailure:
        \t\\- Incorrect handler_option selection.
        LoggerSetupFailure:
        \t\\- Incorrect log level.

    Returns:
        logging.Logger:
        \t\\- The configured logger.
    """
    logger = logging.getLogger(__name__)
    logger.debug(f"=" * 20 + get_function_name() + "=" * 20)
    # Custom flowchart tracking. This is ideal for large projects that move a lot.
    # For any third-party modules, set the flow before making the function call.
    logger_flowchart = logging.getLogger("flowchart")
    logger_flowchart.debug(f"Flowchart --> Function: {get_function_name()}")

    type_check(value=logger_settings, required_type=dict, tb_remove_name="create_logger")

    formatted_logger_settings = "  - logger_settings (dict):\n        - " + "\n        - ".join(
        ": ".join((key, str(val))) for (key, val) in logger_settings.items()
    )
    logger.debug("Passing parameters:\n" f"{formatted_logger_settings}\n")

    missing_keys = [key for key in LOGGER_SETTING_KEYS if key not in logger_settings]
    if missing_keys:
        exc_args = {
            "main_message": "The logger settings dictionary is missing keys.",
            "expected_result": LOGGER_SETTING_KEYS,
            "returned_result": list(logger_settings.keys()),
            "suggested_resolution": "Please verify you have set all required keys and try again.",
        }
        raise FKeyError(message_args=exc_args, tb_remove_name="create_logger")

    save_path = logger_settings["save_path"]
    logger_name = logger_settings["logger_name"]
    format_option = logger_settings["format_option"]
    handler_option = logger_settings["handler_option"]

    type_check(value=save_path, required_type=str, tb_remove_name="create_logger")
    type_check(value=logger_name, required_type=str, tb_remove_name="create_logger")
    type_check(value=logger_settings["log_name"], required_type=str, tb_remove_name="create_logger")
    type_check(value=logger_settings["max_bytes"], required_type=int, tb_remove_name="create_logger")
    type_check(value=logger_settings["backup_count"], required_type=int, tb_remove_name="create_logger")
    type_check(value=format_option, required_type=(str, int), tb_remove_name="create_logger")
    type_check(value=handler_option, required_type=int, tb_remove_name="create_logger")

    created_logger = logging.getLogger(logger_name)
    # Handlers already exist when a logger is created twice in one process.
    if created_logger.handlers:
        logger.debug(f"Returning value(s):\n  - Return = {created_logger} (existing)")
        return created_logger

    if format_option in FORMAT_OPTIONS:
        formatter = logging.Formatter(fmt=FORMAT_OPTIONS[format_option], datefmt="%Y-%m-%d %H:%M:%S")
    elif isinstance(format_option, str) and "%" in format_option:
        formatter = logging.Formatter(fmt=format_option)
    else:
        exc_args = {
            "main_message": "Incorrect format_option selection.",
            "custom_type": LoggerSetupFailure,
            "expected_result": "1, 2 or a format string",
            "returned_result": format_option,
            "suggested_resolution": "Please verify you entered a valid format option number or custom format string.",
        }
        raise LoggerSetupFailure(FCustomException(message_args=exc_args, tb_remove_name="create_logger"))
    if handler_option not in (1, 2, 3):
        exc_args = {
            "main_message": "Incorrect handler_option selection.",
            "custom_type": LoggerSetupFailure,
            "expected_result": [1, 2, 3],
            "returned_result": handler_option,
            "suggested_resolution": "Please verify you entered a valid handler option number.",
        }
        raise LoggerSetupFailure(FCustomException(message_args=exc_args, tb_remove_name="create_logger"))

    levels = {}
    for key in ("file_log_level", "console_log_level"):
        level = logging.getLevelName(str(logger_settings[key]).upper())
        if not isinstance(level, int):
            exc_args = {
                "main_message": "Incorrect log level.",
                "custom_type": LoggerSetupFailure,
                "expected_result": ["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"],
                "returned_result": f"{key}={logger_settings[key]}",
            }
            raise LoggerSetupFailure(FCustomException(message_args=exc_args, tb_remove_name="create_logger"))
        levels[key] = level

    # The logger passes everything; the handlers filter.
    created_logger.setLevel(logging.DEBUG)
    if handler_option in (1, 2):
        os.makedirs(os.path.abspath(save_path), exist_ok=True)
        file_rotation_handler = RotatingFileHandler(
            os.path.join(os.path.abspath(save_path), logger_settings["log_name"]),
            maxBytes=logger_settings["max_bytes"],
            backupCount=logger_settings["backup_count"],
        )
        file_rotation_handler.setLevel(levels["file_log_level"])
        file_rotation_handler.setFormatter(formatter)
        created_logger.addHandler(file_rotation_handler)
    if handler_option in (1, 3):
        console_stream_handler = logging.StreamHandler()
        console_stream_handler.setLevel(levels["console_log_level"])
        console_stream_handler.setFormatter(formatter)
        created_logger.addHandler(console_stream_handler)

    logger.debug(f"Returning value(s):\n  - Return = {created_logger}")
    return created_logger


def _default_log_file(filename_value: str, handler_key: str, separate_default_logs: bool) -> str:
    """Resolves DEFAULT and DEFAULT:<name> file handler paths to a logs folder under the working directory."""
    log_path = os.path.abspath(f"{pathlib.Path.cwd()}/logs")
    os.makedirs(log_path, exist_ok=True)
    if separate_default_logs:
        return os.path.abspath(f"{log_path}/{handler_key}.log")
    if filename_value == "DEFAULT":
        main_program_name = os.path.split(sys.argv[0])[1].replace(".py", "") or "morph3dkit"
        return os.path.abspath(f"{log_path}/{main_program_name}.log")
    return os.path.abspath(f"{log_path}/{filename_value.split(':', 1)[1]}.log")


def setup_logger_yaml(yaml_path: str, separate_default_logs: bool = False, allow_basic: Optional[bool] = None) -> None:
    """
    Sets up logging from a YAML dictConfig file.

    Default Path Option Notes:
    \t\\- A file handler "filename:" of DEFAULT logs to logs/<program>.log under the working directory.\\
    \t\\- DEFAULT:<log name> logs to logs/<log name>.log.\\
    \t\\- separate_default_logs names every DEFAULT file after its handler key instead.

    Args:
        yaml_path (str):
        \t\\- yaml configuration file.
        separate_default_logs (bool, optional):
        \t\\- One log file per DEFAULT file handler. Defaults to False.
        allow_basic (bool, optional):
        \t\\- Falls back to basic INFO logging when the configuration fails.

    Raises:
        FTypeError (fexception):
        \t\\- The object value '{yaml_path}' is not an instance of the required class(es) or subclass(es).
        LoggerSetupFailure:
        \t\\- The logging configuration failed to apply.
    """
    type_check(value=yaml_path, required_type=str, tb_remove_name="setup_logger_yaml")
    type_check(value=separate_default_logs, required_type=bool, tb_remove_name="setup_logger_yaml")
    if allow_basic is not None:
        type_check(value=allow_basic, required_type=bool, tb_remove_name="setup_logger_yaml")

    try:
        config: dict = read_yaml_config(yaml_path, "FullLoader")
        for handler_key, handler in config.get("handlers", {}).items():
            filename_value = handler.get("filename")
            if isinstance(filename_value, str) and filename_value.startswith("DEFAULT"):
                handler["filename"] = _default_log_file(filename_value, handler_key, separate_default_logs)
        logging.config.dictConfig(config)
    except (ValueError, TypeError, AttributeError, KeyError, ImportError) as exc:
        if allow_basic:
            logging.basicConfig(level=logging.INFO)
        else:
            exc_args = {
                "main_message": "The logging configuration failed to apply.",
                "custom_type": LoggerSetupFailure,
                "original_exception": exc,
                "suggested_resolution": "Please verify YAML file configuration.",
            }
            raise LoggerSetupFailure(FCustomException(message_args=exc_args, tb_remove_name="setup_logger_yaml"))
