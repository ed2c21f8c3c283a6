"""
File operations for NetSwitch
Network, state vector and CSV input/output
"""

import csv
import io
import json
import logging
import os
import shutil
import sys

import numpy as np
import scipy.io
import scipy.sparse as sp

from netswitch.core.errors import NetworkError, ParseError, PreconditionError
from netswitch.core.linalg import Network
from netswitch.core.sparsity import SparsityPattern
from netswitch.utils.formatter import format_number

logger = logging.getLogger(__name__)

JSON = "json"
MATRIX_MARKET = "matrix-market"
FORMATS = (JSON, MATRIX_MARKET)


def detect_format(file_path):
    """
    Detect the network format of a file from its extension

    Args:
        file_path (str): Path to the file

    Returns:
        str: 'json' or 'matrix-market'
    """
    _, ext = os.path.splitext(file_path)
    ext = ext.lower()
    if ext in (".mtx", ".mm"):
        return MATRIX_MARKET
    return JSON


def read_file(file_path):
    """
    Read a text file

    Args:
        file_path (str): Path to the file

    Returns:
        str: File contents
    """
    try:
        with open(file_path, "r", encoding="utf-8") as f:
            return f.read()
    except UnicodeDecodeError:
        with open(file_path, "r", encoding="latin-1") as f:
            return f.read()
    except OSError as e:
        raise ParseError(e.strerror or str(e), path=file_path)


def _reject_constant(name):
    raise ValueError(f"non-finite value {name}")


def _json_row_line(text, row):
    """Best-effort 1-based line of the given matrix row in a JSON document"""
    start = text.find('"matrix"')
    if start < 0:
        return None
    depth = 0
    count = -1
    for pos in range(start, len(text)):
        ch = text[pos]
        if ch == "[":
            depth += 1
            if depth == 2:
                count += 1
                if count == row:
                    return text.count("\n", 0, pos) + 1
        elif ch == "]":
            depth -= 1
            if depth == 0:
                break
    return None


def _load_json(path):
    text = read_file(path)
    try:
        data = json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as e:
        raise ParseError(e.msg, path=path, line=e.lineno)
    except ValueError as e:
        raise ParseError(str(e), path=path)

    if not isinstance(data, dict) or "matrix" not in data:
        raise ParseError('expected an object with a "matrix" entry', path=path)
    rows = data["matrix"]
    if not isinstance(rows, list) or not rows:
        raise ParseError('"matrix" must be a non-empty list of rows', path=path)

    n = len(rows)
    for i, row in enumerate(rows):
        line = _json_row_line(text, i)
        if not isinstance(row, list) or len(row) != n:
            raise ParseError(f"row {i + 1} must hold {n} numbers for a square matrix", path=path, line=line)
        for value in row:
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise ParseError(f"row {i + 1} has a non-numeric entry {value!r}", path=path, line=line)

    if "n" in data and data["n"] != n:
        raise ParseError(f'"n" is {data["n"]} but the matrix has {n} rows', path=path)
    label = data.get("label", os.path.splitext(os.path.basename(path))[0])
    if not isinstance(label, str):
        raise ParseError('"label" must be a string', path=path)
    return rows, label


def _check_mm_header(path):
    with open(path, "r", encoding="latin-1") as f:
        header = f.readline().split()
    if len(header) < 5 or header[0].lower() != "%%matrixmarket":
        raise ParseError("missing %%MatrixMarket header", path=path, line=1)
    _, obj, layout, field, symmetry = (h.lower() for h in header[:5])
    if obj != "matrix" or layout not in ("coordinate", "array"):
        raise ParseError(f"unsupported Matrix Market object '{obj} {layout}'", path=path, line=1)
    if field not in ("real", "integer", "double"):
        raise ParseError(f"unsupported Matrix Market field '{field}', expected real", path=path, line=1)
    if symmetry not in ("general", "symmetric", "skew-symmetric"):
        raise ParseError(f"unsupported Matrix Market symmetry '{symmetry}'", path=path, line=1)


def _load_matrix_market(path):
    try:
        _check_mm_header(path)
    except OSError as e:
        raise ParseError(e.strerror or str(e), path=path)
    try:
        M = scipy.io.mmread(path)
    except (ValueError, IndexError, TypeError) as e:
        raise ParseError(f"malformed Matrix Market data: {e}", path=path)
    if sp.issparse(M):
        M = M.toarray()
    return np.asarray(M, dtype=float), os.path.splitext(os.path.basename(path))[0]


def load_network(path, fmt=None):
    """
    Load a network from JSON or Matrix Market

    Args:
        path (str): Input file
        fmt (str, optional): 'json' or 'matrix-market', detected from the extension by default

    Returns:
        Network: Validated network
    """
    fmt = fmt or detect_format(path)
    if fmt not in FORMATS:
        raise ParseError(f"unknown network format '{fmt}'", path=path)
    if not os.path.exists(path):
        raise ParseError("file not found", path=path)

    if fmt == JSON:
        weights, label = _load_json(path)
    else:
        weights, label = _load_matrix_market(path)

    try:
        network = Network(weights, label)
    except NetworkError as e:
        raise ParseError(e.message, path=path)
    logger.debug("Loaded %r from %s", network, path)
    return network


def _create_backup(file_path):
    """
    Create a backup of a file

    Args:
        file_path (str): Path to the file to backup

    Returns:
        str: Path to the backup file or None if there was nothing to back up
    """
    if not os.path.exists(file_path):
        return None
    backup_path = file_path + ".bak"
    shutil.copy2(file_path, backup_path)
    return backup_path


def _restore_from_backup(backup_path, file_path):
    """
    Restore a file from its backup

    Args:
        backup_path (str): Path to the backup file
        file_path (str): Path to restore to

    Returns:
        bool: True if restored
    """
    if not backup_path or not os.path.exists(backup_path):
        return False
    shutil.copy2(backup_path, file_path)
    os.unlink(backup_path)
    return True


def save_network(net, path, fmt=None, coordinate=False):
    """
    Save a network so that loading it back gives identical values

    Args:
        net (Network): Network to save
        path (str): Output file
        fmt (str, optional): 'json' or 'matrix-market', detected from the extension by default
        coordinate (bool): Write Matrix Market in coordinate rather than array layout

    Returns:
        str: The path written
    """
    fmt = fmt or detect_format(path)
    if fmt not in FORMATS:
        raise ParseError(f"unknown network format '{fmt}'", path=path)
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)

    backup_path = _create_backup(path)
    try:
        if fmt == JSON:
            document = {"n": net.n, "label": net.label, "matrix": net.weights.tolist()}
            with open(path, "w", encoding="utf-8") as f:
                json.dump(document, f, indent=2)
                f.write("\n")
        else:
            data = sp.coo_matrix(net.weights) if coordinate else np.asarray(net.weights)
            with open(path, "wb") as f:
                scipy.io.mmwrite(f, data, comment=net.label, field="real", precision=17, symmetry="general")
    except Exception:
        _restore_from_backup(backup_path, path)
        raise

    if backup_path:
        os.unlink(backup_path)
    logger.debug("Saved %r to %s", net, path)
    return path


def load_vector(path, n=None):
    """
    Load a state vector from JSON or from comma/whitespace separated text

    Args:
        path (str): Input file
        n (int, optional): Required length

    Returns:
        numpy.ndarray: The vector
    """
    text = read_file(path)
    if path.lower().endswith(".json"):
        try:
            values = json.loads(text, parse_constant=_reject_constant)
        except json.JSONDecodeError as e:
            raise ParseError(e.msg, path=path, line=e.lineno)
        except ValueError as e:
            raise ParseError(str(e), path=path)
        if not isinstance(values, list) or any(
            isinstance(v, bool) or not isinstance(v, (int, float)) for v in values
        ):
            raise ParseError("expected a JSON list of numbers", path=path)
    else:
        values = []
        for lineno, line in enumerate(text.splitlines(), start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            for token in line.replace(",", " ").split():
                try:
                    value = float(token)
                except ValueError:
                    raise ParseError(f"'{token}' is not a number", path=path, line=lineno)
                if not np.isfinite(value):
                    raise ParseError(f"non-finite value '{token}'", path=path, line=lineno)
                values.append(value)

    vector = np.asarray(values, dtype=float)
    if vector.size == 0:
        raise ParseError("vector is empty", path=path)
    if n is not None and vector.size != n:
        raise ParseError(f"vector has length {vector.size}, expected {n}", path=path)
    return vector


def write_csv(header, rows, path=None, stream=None):
    """
    Write rows of numbers with 17 significant digits

    Args:
        header (list): Column names
        rows (iterable): Rows of numbers or strings
        path (str, optional): Output file
        stream (file, optional): Stream used when no path is given, stdout by default

    Returns:
        str: The CSV text
    """
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_number(v) for v in row])
    text = buffer.getvalue()

    if path is None:
        (stream or sys.stdout).write(text)
    else:
        directory = os.path.dirname(path)
        if directory:
            os.makedirs(directory, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="") as f:
            f.write(text)
    return text


def write_matrix_csv(M, path):
    """Write a matrix as headerless CSV with 17 significant digits"""
    M = np.asarray(M, dtype=float)
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        for row in M:
            writer.writerow([format_number(v) for v in row])
    return path


def write_json(data, path):
    """Write a JSON document"""
    with open(path, "w", encoding="utf-8") as f:
        json.dump(data, f, indent=2)
        f.write("\n")
    return path


def load_pattern(path, n):
    """
    Load a forced-zero pattern from a JSON list of 1-based [i, j] edges

    Args:
        path (str): Input file
        n (int): Network size

    Returns:
        SparsityPattern: The pattern
    """
    text = read_file(path)
    try:
        data = json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as e:
        raise ParseError(e.msg, path=path, line=e.lineno)
    except ValueError as e:
        raise ParseError(str(e), path=path)
    if isinstance(data, dict):
        data = data.get("pattern")
    if not isinstance(data, list):
        raise ParseError('expected a list of [i, j] edges or an object with a "pattern" entry', path=path)
    for edge in data:
        if not (isinstance(edge, list) and len(edge) == 2 and all(isinstance(v, int) for v in edge)):
            raise ParseError(f"edge {edge!r} is not a pair of integers", path=path)
    try:
        return SparsityPattern(n, data)
    except PreconditionError as e:
        raise ParseError(e.message, path=path)
