"""
Settings management for NetSwitch
Tolerances, solver defaults and parallelism, persisted as JSON
"""

import json
import logging
import os

from netswitch.core.errors import ParseError

logger = logging.getLogger(__name__)

SETTINGS_DIR = ".netswitch"
SETTINGS_FILE = "settings.json"
THREADS_ENV = "NETSWITCH_THREADS"

DEFAULT_SETTINGS = {
    # Linear algebra
    "tol_eig": 1e-8,
    "tol_comm": 1e-10,
    "tol_rank": 1e-10,
    "cond_warn": 1e12,

    # Linear programming
    "lp_feasibility_tol": 1e-8,
    "lp_pivot_tol": 1e-9,
    "lp_backend": "auto",
    "simplex_max_cells": 400000,

    # Simulation
    "subsamples": 20,

    # Network design
    "restarts": 8,
    "max_iter": 100,
    "am_tol": 1e-6,
    "gamma_low": 1.0,
    "gamma_high": 100.0,
    "truncate_above": 30,
    "truncated_order": 12,
    "snap_tol": 1e-9,
    "polish_tol": 1e-7,

    # Runtime
    "threads": 1,
    "log_level": "WARNING",
}

LP_BACKENDS = ("auto", "simplex", "highs")
LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR")

# Active settings
_settings = dict(DEFAULT_SETTINGS)


def default_settings_path(directory=None):
    """
    Get the default settings file location

    Args:
        directory (str, optional): Base directory, defaults to the working directory

    Returns:
        str: Path of the settings JSON file
    """
    return os.path.join(directory or os.getcwd(), SETTINGS_DIR, SETTINGS_FILE)


def _coerce(key, value):
    """Check a value against the type of its default"""
    default = DEFAULT_SETTINGS[key]
    if isinstance(default, bool) or isinstance(value, bool):
        raise ParseError(f"setting '{key}' has unsupported type {type(value).__name__}")
    if isinstance(default, int) and not isinstance(default, bool):
        if isinstance(value, float) and value.is_integer():
            value = int(value)
        if not isinstance(value, int):
            raise ParseError(f"setting '{key}' must be an integer")
        if value < 0:
            raise ParseError(f"setting '{key}' must be non-negative")
        return value
    if isinstance(default, float):
        if not isinstance(value, (int, float)):
            raise ParseError(f"setting '{key}' must be a number")
        if value <= 0:
            raise ParseError(f"setting '{key}' must be positive")
        return float(value)
    if not isinstance(value, str):
        raise ParseError(f"setting '{key}' must be a string")
    if key == "lp_backend" and value not in LP_BACKENDS:
        raise ParseError(f"lp_backend must be one of {', '.join(LP_BACKENDS)}")
    if key == "log_level" and value.upper() not in LOG_LEVELS:
        raise ParseError(f"log_level must be one of {', '.join(LOG_LEVELS)}")
    return value.upper() if key == "log_level" else value


def get_setting(key):
    """
    Get the active value of a setting

    Args:
        key (str): Setting name

    Returns:
        The active value; the environment overrides 'threads'
    """
    if key not in DEFAULT_SETTINGS:
        raise KeyError(key)
    if key == "threads" and os.environ.get(THREADS_ENV):
        try:
            return max(1, int(os.environ[THREADS_ENV]))
        except ValueError:
            logger.warning("Ignoring non-integer %s=%r", THREADS_ENV, os.environ[THREADS_ENV])
    return _settings[key]


def resolve(key, value=None):
    """Return value if given, else the active setting"""
    return get_setting(key) if value is None else value


def set_setting(key, value):
    """
    Set a single setting

    Args:
        key (str): Setting name
        value: New value, checked against the default's type
    """
    if key not in DEFAULT_SETTINGS:
        raise ParseError(f"unknown setting '{key}'")
    _settings[key] = _coerce(key, value)


def update_settings(mapping):
    """
    Merge several settings; unknown keys are skipped with a warning

    Args:
        mapping (dict): Setting names to values
    """
    for key, value in mapping.items():
        if key not in DEFAULT_SETTINGS:
            logger.warning("Ignoring unknown setting '%s'", key)
            continue
        _settings[key] = _coerce(key, value)


def reset_settings():
    """Restore every setting to its default"""
    _settings.clear()
    _settings.update(DEFAULT_SETTINGS)


def current_settings():
    """
    Get a copy of the active settings

    Returns:
        dict: Setting names to values
    """
    return dict(_settings)


def load_settings(path=None):
    """
    Load settings from a JSON file

    Args:
        path (str, optional): Settings file, defaults to .netswitch/settings.json

    Returns:
        bool: True if a file was found and applied
    """
    path = path or default_settings_path()
    if not os.path.exists(path):
        logger.debug("No settings file at %s", path)
        return False

    try:
        with open(path, "r") as f:
            data = json.load(f)
    except json.JSONDecodeError as e:
        raise ParseError(e.msg, path=path, line=e.lineno)
    except OSError as e:
        raise ParseError(str(e), path=path)

    if not isinstance(data, dict):
        raise ParseError("settings file must hold a JSON object", path=path)

    try:
        update_settings(data)
    except ParseError as e:
        raise ParseError(e.message, path=path)
    logger.info("Loaded settings from %s", path)
    return True


def save_settings(path=None):
    """
    Save the active settings to a JSON file

    Args:
        path (str, optional): Settings file, defaults to .netswitch/settings.json

    Returns:
        str: The path written
    """
    path = path or default_settings_path()
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, "w") as f:
        json.dump(_settings, f, indent=4)
    return path
