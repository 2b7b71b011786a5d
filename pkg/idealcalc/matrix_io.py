"""Plain-text matrix fixtures.

Format: the dimension ``n`` on the first line, then n rows each holding 2n
whitespace-separated reals, the (re, im) pairs of that row's entries.
Lines starting with ``#`` are ignored.
"""

from __future__ import annotations

import os
from typing import Union

import numpy as np

from .core.operators import Matrix, as_matrix
from .errors import InvalidArgumentError

PathLike = Union[str, os.PathLike]


def parse_matrix(text: str) -> Matrix:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise InvalidArgumentError("empty matrix file")
    try:
        n = int(lines[0])
    except ValueError as exc:
        raise InvalidArgumentError(f"first line must be the dimension, got {lines[0]!r}") from exc
    if n < 1:
        raise InvalidArgumentError(f"dimension must be >= 1, got {n}")
    rows = lines[1:]
    if len(rows) != n:
        raise InvalidArgumentError(f"expected {n} rows, found {len(rows)}")
    out = np.empty((n, n), dtype=np.complex128)
    for i, row in enumerate(rows):
        try:
            values = [float(tok) for tok in row.split()]
        except ValueError as exc:
            raise InvalidArgumentError(f"row {i + 1}: {exc}") from exc
        if len(values) != 2 * n:
            raise InvalidArgumentError(f"row {i + 1}: expected {2 * n} numbers, found {len(values)}")
        pairs = np.asarray(values).reshape(n, 2)
        out[i] = pairs[:, 0] + 1j * pairs[:, 1]
    return as_matrix(out)


def format_matrix(x: Matrix) -> str:
    x = as_matrix(x)
    n = x.shape[0]
    lines = [str(n)]
    for row in x:
        lines.append(" ".join(f"{v.real!r} {v.imag!r}" for v in row.tolist()))
    return "\n".join(lines) + "\n"


def read_matrix(path: PathLike) -> Matrix:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_matrix(fh.read())


def write_matrix(x: Matrix, path: PathLike) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_matrix(x))
