"""
This script is used to test the log_director module using pytest.
"""
# Built-in/Generic Imports
import os
import logging
from importlib import resources

# Libraries
import pytest

# Local Functions
from morph3dkit import create_logger, setup_logger_yaml


__author__ = "IncognitoCoding"
__copyright__ = "Copyright 2022, test_log_director"
__credits__ = ["IncognitoCoding"]
__license__ = "MIT"
__version__ = "0.4"
__maintainer__ = "IncognitoCoding"
__status__ = "Production"


def _settings(save_path: str, logger_name: str, **overrides) -> dict:
    # Options:
    #   format_option 1 - timestamped with module, function and line, 2 - message only
    #   handler_option 1 - both, 2 - file, 3 - console
    settings = {
        "save_path": save_path,
        "logger_name": logger_name,
        "log_name": "pytest_run.log",
        "max_bytes": 1000000,
        "file_log_level": "DEBUG",
        "console_log_level": "INFO",
        "backup_count": 3,
        "format_option": 1,
        "handler_option": 1,
    }
    settings.update(overrides)
    return settings


def test_create_logger(tmp_path):
    """
    Tests creating a file and console logger.
    """
    print("")
    print("-" * 65)
    print("-" * 65)
    print("Testing Function: create_logger")
    print("-" * 65)
    print("-" * 65)
    print("")

    # ############################################################
    # ######Section Test Part 1 (Successful Value Checking)#######
    # ############################################################
    created = create_logger(_settings(str(tmp_path), "pytest_logger"))
    assert len(created.handlers) == 2
    created.info("registration finished")
    for handler in created.handlers:
        handler.flush()
    with open(os.path.join(tmp_path, "pytest_run.log"), "r", encoding="utf-8") as f:
        assert "INFO|registration finished" in f.read()

    # A second call reuses the configured logger.
    assert create_logger(_settings(str(tmp_path), "pytest_logger")) is created
    assert len(created.handlers) == 2
    for handler in list(created.handlers):
        handler.close()
        created.removeHandler(handler)

    console_settings = _settings(str(tmp_path / "unused"), "pytest_console_logger", handler_option=3, format_option=2)
    console = create_logger(console_settings)
    assert [type(h) for h in console.handlers] == [logging.StreamHandler]
    assert not os.path.exists(tmp_path / "unused")

    # ############################################################
    # ######Section Test Part 2 (Error/Catch Value Checking)######
    # ############################################################
    with pytest.raises(Exception) as excinfo:
        create_logger(_settings(str(tmp_path), "pytest_bad_handler", handler_option=4))
    assert """Incorrect handler_option selection.""" in str(excinfo.value)

    with pytest.raises(Exception) as excinfo:
        create_logger(_settings(str(tmp_path), "pytest_bad_level", file_log_level="LOUD"))
    assert """Incorrect log level.""" in str(excinfo.value)

    settings = _settings(str(tmp_path), "pytest_missing")
    del settings["backup_count"]
    with pytest.raises(Exception) as excinfo:
        create_logger(settings)
    assert """The logger settings dictionary is missing keys.""" in str(excinfo.value)


def test_setup_logger_yaml(tmp_path, monkeypatch):
    """
    Tests the packaged logging YAML with DEFAULT file paths.
    """
    print("")
    print("-" * 65)
    print("-" * 65)
    print("Testing Function: setup_logger_yaml")
    print("-" * 65)
    print("-" * 65)
    print("")

    # ############################################################
    # ######Section Test Part 1 (Successful Value Checking)#######
    # ############################################################
    monkeypatch.chdir(tmp_path)
    sample = resources.files("morph3dkit").joinpath("directors/samples/log_director/logging.yaml")
    with resources.as_file(sample) as yaml_path:
        setup_logger_yaml(str(yaml_path))
    assert (tmp_path / "logs" / "morph3dkit.log").is_file()

    with resources.as_file(sample) as yaml_path:
        setup_logger_yaml(str(yaml_path), separate_default_logs=True)
    assert (tmp_path / "logs" / "run_file_handler.log").is_file()

    root = logging.getLogger()
    for handler in list(root.handlers):
        handler.close()
        root.removeHandler(handler)

    # ############################################################
    # ######Section Test Part 2 (Error/Catch Value Checking)######
    # ############################################################
    broken = tmp_path / "broken.yaml"
    broken.write_text("version: 1\nhandlers:\n  bad:\n    class: logging.NoSuchHandler\n", encoding="utf-8")
    with pytest.raises(Exception) as excinfo:
        setup_logger_yaml(str(broken))
    assert """The logging configuration failed to apply.""" in str(excinfo.value)
