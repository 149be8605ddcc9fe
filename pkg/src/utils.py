"""
Utility functions shared by the numerical modules and the command line
"""

import csv
import io
import math
from typing import Any, Iterable, List, Sequence, Union

import numpy as np
from scipy.stats import unitary_group

JsonComplex = Union[float, int, List[float], str]


def derive_seed(seed: int, *keys: int) -> int:
    """
    Derive a child seed from a global seed and a path of integer keys

    The same (seed, keys) always gives the same child, independent of the
    order in which children are requested.

    Args:
        seed: Global experiment seed
        keys: Integer path identifying the task (flag index, step k, ...)

    Returns:
        A 63-bit integer seed
    """
    sequence = np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(k) for k in keys))
    return int(sequence.generate_state(1, dtype=np.uint64)[0] >> np.uint64(1))


def make_rng(seed: int, *keys: int) -> np.random.Generator:
    """Seeded generator for the task identified by keys"""
    return np.random.default_rng(derive_seed(seed, *keys))


def random_complex_matrix(rng: np.random.Generator, rows: int, cols: int = None) -> np.ndarray:
    """Matrix with independent standard complex Gaussian entries"""
    cols = rows if cols is None else cols
    return (rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))) / math.sqrt(2.0)


def random_invertible(rng: np.random.Generator, n: int, max_condition: float = 1e3) -> np.ndarray:
    """Random complex matrix with condition number below max_condition"""
    while True:
        matrix = random_complex_matrix(rng, n)
        if np.linalg.cond(matrix) < max_condition:
            return matrix


def random_unitary(rng: np.random.Generator, n: int) -> np.ndarray:
    """Haar-random unitary matrix"""
    if n == 1:
        return np.exp(2j * math.pi * rng.random()) * np.ones((1, 1), dtype=complex)
    return unitary_group.rvs(n, random_state=rng)


def random_skew_hermitian(rng: np.random.Generator, n: int) -> np.ndarray:
    """Skew-Hermitian matrix with unit Frobenius norm"""
    a = random_complex_matrix(rng, n)
    s = a - a.conj().T
    norm = np.linalg.norm(s)
    return s / norm if norm > 0 else s


def skew_hermitian_from_params(params: np.ndarray, n: int) -> np.ndarray:
    """
    Build a skew-Hermitian matrix with zero diagonal from n(n-1) real numbers

    The strictly upper triangle holds params[0::2] + i params[1::2]; the
    diagonal is left out because it only rescales the columns of an adapted
    basis and does not move the flag.
    """
    rows, cols = np.triu_indices(n, k=1)
    upper = np.zeros((n, n), dtype=complex)
    upper[rows, cols] = params[0::2] + 1j * params[1::2]
    return upper - upper.conj().T


def compensated_sum(values: Iterable[float]) -> float:
    """Exactly rounded sum in iteration order (independent of magnitudes)"""
    return math.fsum(values)


def format_real(value: float) -> str:
    """Format a real number with 17 significant digits"""
    if math.isnan(value):
        return "nan"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return f"{value:.17g}"


def format_complex(value: complex) -> str:
    """Human readable complex number, 'inf' for the point at infinity"""
    value = complex(value)
    if math.isinf(value.real) or math.isinf(value.imag):
        return "inf"
    sign = "+" if value.imag >= 0 else "-"
    return f"{format_real(value.real)}{sign}{format_real(abs(value.imag))}j"


def complex_to_json(value: complex) -> JsonComplex:
    """Encode a complex number as [re, im] (or 'inf')"""
    value = complex(value)
    if math.isinf(value.real) or math.isinf(value.imag):
        return "inf"
    return [float(value.real), float(value.imag)]


def complex_from_json(data: Any) -> complex:
    """
    Decode [re, im], a bare number, or 'inf'

    Raises:
        ValueError: If the value has another shape
    """
    if isinstance(data, str):
        if data.strip().lower() in ("inf", "infinity", "oo"):
            return complex(math.inf, 0.0)
        raise ValueError(f"Invalid complex value: {data!r}")
    if isinstance(data, bool):
        raise ValueError(f"Invalid complex value: {data!r}")
    if isinstance(data, (int, float)):
        return complex(float(data), 0.0)
    if isinstance(data, (list, tuple)) and len(data) == 2 and all(
        isinstance(part, (int, float)) and not isinstance(part, bool) for part in data
    ):
        return complex(float(data[0]), float(data[1]))
    raise ValueError(f"Invalid complex value: {data!r}")


def matrix_to_json(matrix: np.ndarray) -> List[List[JsonComplex]]:
    """Encode a complex matrix row by row"""
    return [[complex_to_json(entry) for entry in row] for row in np.asarray(matrix)]


def matrix_from_json(data: Any) -> np.ndarray:
    """
    Decode a rectangular list of rows of complex entries

    Raises:
        ValueError: If rows are missing, ragged, or contain invalid entries
    """
    if not isinstance(data, (list, tuple)) or not data:
        raise ValueError("Matrix must be a non-empty list of rows")
    rows = []
    for row in data:
        if not isinstance(row, (list, tuple)):
            raise ValueError("Matrix rows must be lists")
        rows.append([complex_from_json(entry) for entry in row])
    width = len(rows[0])
    if any(len(row) != width for row in rows):
        raise ValueError("Matrix rows have different lengths")
    return np.array(rows, dtype=complex)


def render_rows(rows: Sequence[Sequence[Any]], columns: Sequence[str], fmt: str = "csv") -> str:
    """
    Render rows as CSV (header mandatory) or as an aligned text table

    Args:
        rows: Row values; floats are formatted with 17 significant digits
        columns: Column names, in output order
        fmt: "csv" or "table"

    Returns:
        The rendered text, newline terminated
    """
    cells = [[_cell(value) for value in row] for row in rows]
    if fmt == "csv":
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(columns)
        writer.writerows(cells)
        return buffer.getvalue()
    if fmt != "table":
        raise ValueError(f"Unknown output format: {fmt}")

    widths = [len(name) for name in columns]
    for row in cells:
        widths = [max(width, len(cell)) for width, cell in zip(widths, row)]
    lines = ["  ".join(name.ljust(width) for name, width in zip(columns, widths))]
    lines.append("  ".join("-" * width for width in widths))
    for row in cells:
        lines.append("  ".join(cell.ljust(width) for cell, width in zip(row, widths)))
    return "\n".join(lines) + "\n"


def _cell(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format_real(value)
    if isinstance(value, complex):
        return format_complex(value)
    return str(value)
