"""
Plain-text generator matrix files.

Format::

    # optional comment lines
    q p m [c0 ... cm] k n
    k rows of n integers in [0, q)

The modulus coefficients are present only for extension fields (m > 1), e.g.
``8 2 3 1 1 0 1 3 7`` for GF(8) = GF(2)[x]/(x^3 + x + 1). Entries use the
integer encoding of the field module.
"""

from __future__ import annotations

from pathlib import Path
from typing import List, Optional, Tuple, Union

import numpy as np

from .errors import FieldError, MatrixError, MatrixFileError
from .field import FieldSpec, field_make
from .matrix import GeneratorMatrix

__all__ = ["format_matrix", "parse_matrix_file", "parse_matrix_text", "write_matrix_file"]

PathLike = Union[str, Path]


def _tokens(line: str) -> List[Tuple[int, str]]:
    """(1-based column, token) pairs of a whitespace separated line."""
    result = []
    position = 0
    for token in line.split():
        position = line.index(token, position)
        result.append((position + 1, token))
        position += len(token)
    return result


def _to_int(token: str, path: Optional[PathLike], line: int, column: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise MatrixFileError(f"expected an integer, got '{token}'", path, line, column) from None


def _parse_header(
    tokens: List[Tuple[int, str]], path: Optional[PathLike], line: int
) -> Tuple[FieldSpec, int, int]:
    values = [_to_int(token, path, line, col) for col, token in tokens]
    if len(values) < 5:
        raise MatrixFileError("header needs at least 'q p m k n'", path, line)
    q, p, m = values[:3]
    expected = 5 if m == 1 else 5 + m + 1
    if len(values) != expected:
        raise MatrixFileError(
            f"header for m = {m} needs {expected} integers, got {len(values)}", path, line
        )
    coefficients = tuple(values[3:-2]) if m > 1 else None
    k, n = values[-2:]
    try:
        spec = field_make(p, m, coefficients)
    except FieldError as exc:
        raise MatrixFileError(str(exc), path, line, tokens[1][0]) from None
    if spec.q != q:
        raise MatrixFileError(f"q = {q} does not equal p^m = {spec.q}", path, line, tokens[0][0])
    if k < 1 or n < k:
        raise MatrixFileError(f"need 1 <= k <= n, got k = {k}, n = {n}", path, line)
    return spec, k, n


def parse_matrix_text(text: str, path: Optional[PathLike] = None) -> GeneratorMatrix:
    """Parse matrix file contents; ``path`` only labels error messages."""
    header: Optional[Tuple[FieldSpec, int, int]] = None
    rows: List[List[int]] = []
    last_line = 0
    first_row = 1
    for number, raw in enumerate(text.splitlines(), start=1):
        last_line = number
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        tokens = _tokens(raw)
        if header is None:
            header = _parse_header(tokens, path, number)
            first_row = number + 1
            continue
        spec, k, n = header
        if len(rows) == k:
            raise MatrixFileError(f"unexpected extra row, the header declares k = {k}", path, number)
        if len(tokens) != n:
            raise MatrixFileError(f"expected {n} entries, got {len(tokens)}", path, number)
        row = []
        for column, token in tokens:
            value = _to_int(token, path, number, column)
            if not 0 <= value < spec.q:
                raise MatrixFileError(
                    f"entry {value} is outside [0, {spec.q})", path, number, column
                )
            row.append(value)
        rows.append(row)
    if header is None:
        raise MatrixFileError("missing header line", path, last_line or 1)
    spec, k, _ = header
    if len(rows) != k:
        raise MatrixFileError(f"expected {k} rows, got {len(rows)}", path, last_line)
    try:
        return GeneratorMatrix(spec, np.array(rows, dtype=np.int64))
    except MatrixError as exc:
        raise MatrixFileError(str(exc), path, first_row) from None


def parse_matrix_file(path: PathLike) -> GeneratorMatrix:
    file_path = Path(path)
    try:
        text = file_path.read_text(encoding="utf-8")
    except OSError as exc:
        raise MatrixFileError(f"cannot read file: {exc.strerror}", file_path) from None
    return parse_matrix_text(text, file_path)


def format_matrix(matrix: GeneratorMatrix) -> str:
    """Canonical text form: header line, then one line per row, newline terminated."""
    spec = matrix.spec
    header = [spec.q, spec.p, spec.m]
    if spec.m > 1:
        header.extend(spec.modulus)
    header.extend([matrix.k, matrix.n])
    lines = [" ".join(str(v) for v in header)]
    lines.extend(" ".join(str(v) for v in row) for row in matrix.rows())
    return "\n".join(lines) + "\n"


def write_matrix_file(matrix: GeneratorMatrix, path: PathLike) -> Path:
    file_path = Path(path)
    file_path.parent.mkdir(parents=True, exist_ok=True)
    file_path.write_text(format_matrix(matrix), encoding="utf-8")
    return file_path
