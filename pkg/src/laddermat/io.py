"""Reading and writing matrices and ladders.

Matrix JSON: ``{"rows": m, "cols": n, "entries": [["num", "den"], ...]}``,
row-major, numerators and denominators as decimal strings. Matrix CSV: one
row per line, cells are integers or ``p/q``.

Ladder JSON: ``{"m": 3, "n": 3, "upper": [[1, 2], [2, 3]], "lower": [[3, 1]]}``
or ``{"cells": [[i, j], ...]}`` (optionally with ``m`` and ``n``).
"""

from __future__ import annotations

import csv
import io
import json
from fractions import Fraction
from pathlib import Path

from .errors import LadderMatError, ValidationError
from .ladder import CellSet, Ladder, corners_decompose
from .linalg import RationalMatrix


class ParseError(LadderMatError, ValueError):
    pass


def matrix_to_json(M: RationalMatrix) -> dict:
    return {"rows": M.rows, "cols": M.cols,
            "entries": [[str(x.numerator), str(x.denominator)] for x in M.entries]}


def matrix_from_json(data: dict) -> RationalMatrix:
    try:
        rows, cols, entries = int(data["rows"]), int(data["cols"]), data["entries"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"matrix JSON needs integer 'rows', 'cols' and an 'entries' list: {exc}") from None
    values = []
    for k, e in enumerate(entries):
        try:
            num, den = e
            den = int(den)
            if den <= 0:
                raise ValueError("denominator must be positive")
            values.append(Fraction(int(num), den))
        except (TypeError, ValueError) as exc:
            raise ParseError(f"entry {k}: expected [\"num\", \"den\"], got {e!r} ({exc})") from None
    if len(values) != rows * cols:
        raise ValidationError(f"entries length {len(values)} differs from rows x cols = {rows * cols}")
    return RationalMatrix(rows, cols, tuple(values))


def matrix_from_csv(text: str) -> RationalMatrix:
    rows = []
    for lineno, record in enumerate(csv.reader(io.StringIO(text)), start=1):
        if not record or all(not c.strip() for c in record):
            continue
        row = []
        for col, cell in enumerate(record, start=1):
            try:
                row.append(Fraction(cell.strip()))
            except (ValueError, ZeroDivisionError):
                raise ParseError(f"line {lineno}, column {col}: cannot parse {cell!r} as an integer or p/q") from None
        rows.append(row)
    if not rows:
        raise ParseError("CSV contains no rows")
    widths = {len(r) for r in rows}
    if len(widths) != 1:
        raise ParseError(f"rows have differing lengths {sorted(widths)}")
    return RationalMatrix.from_rows(rows)


def matrix_to_csv(M: RationalMatrix) -> str:
    return "\n".join(",".join(str(x) for x in row) for row in M.to_rows()) + "\n"


def _read_json(path: Path):
    try:
        return json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


def load_matrix(path) -> RationalMatrix:
    path = Path(path)
    if path.suffix.lower() == ".csv":
        return matrix_from_csv(path.read_text())
    return matrix_from_json(_read_json(path))


def save_matrix(path, M: RationalMatrix) -> None:
    path = Path(path)
    if path.suffix.lower() == ".csv":
        path.write_text(matrix_to_csv(M))
    else:
        path.write_text(json.dumps(matrix_to_json(M)) + "\n")


def ladder_from_json(data: dict) -> Ladder:
    if "cells" in data:
        try:
            cells = frozenset((int(i), int(j)) for i, j in data["cells"])
        except (TypeError, ValueError):
            raise ParseError("'cells' must be a list of [i, j] pairs") from None
        if not cells:
            raise ValidationError("a ladder needs at least one cell")
        m = int(data.get("m", max(i for i, _ in cells)))
        n = int(data.get("n", max(j for _, j in cells)))
        return corners_decompose(CellSet(m, n, cells))
    try:
        m, n = int(data["m"]), int(data["n"])
        upper = [tuple(int(x) for x in c) for c in data["upper"]]
        lower = [tuple(int(x) for x in c) for c in data["lower"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"ladder JSON needs 'm', 'n', 'upper', 'lower' or a 'cells' list: {exc}") from None
    return Ladder.from_corners(m, n, upper, lower)


def load_ladder(path) -> Ladder:
    return ladder_from_json(_read_json(Path(path)))


def save_ladder(path, L: Ladder) -> None:
    Path(path).write_text(json.dumps(L.to_dict()) + "\n")
