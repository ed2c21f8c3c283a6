"""
JSON highlighter for NetSwitch using Pygments
"""

import json

import numpy as np
from pygments import highlight
from pygments.formatters import TerminalFormatter
from pygments.lexers import JsonLexer


def _default(value):
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    raise TypeError(f"{type(value).__name__} is not JSON serializable")


def to_json(data):
    """
    Serialize a report with numpy values converted

    Args:
        data (dict): Report

    Returns:
        str: Indented JSON text
    """
    return json.dumps(data, indent=2, default=_default)


def highlight_json(text, color=True):
    """
    Colorize JSON text for a terminal

    Args:
        text (str): JSON document
        color (bool): Apply terminal colors

    Returns:
        str: The text, highlighted when color is True
    """
    if not color:
        return text if text.endswith("\n") else text + "\n"
    return highlight(text, JsonLexer(), TerminalFormatter())
