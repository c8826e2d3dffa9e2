"""Strict CSV helpers shared by dictionary, window, trajectory and QP archives."""
import re
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Union
import numpy as np
import pandas as pd
from ..errors import DataFormatError

FLOAT_FORMAT = '%.17g'
PathLike = Union[str, Path]

_LINE_IN_MESSAGE = re.compile(r"line (\d+)")


def write_frame(frame: pd.DataFrame, path: PathLike) -> None:
    """Write with round-trip float precision and ``\\n`` line endings."""
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(
        path,
        index=False,
        float_format=FLOAT_FORMAT,
        na_rep='nan',
        lineterminator='\n'
    )


def read_frame(
    path: PathLike,
    expected_columns: Optional[List[str]] = None,
    text_columns: Iterable[str] = ()
) -> pd.DataFrame:
    """Read a CSV whose cells are all numeric except ``text_columns``.

    Cells are parsed with ``float`` so every value written by
    :func:`write_frame` comes back bit for bit.

    Raises:
        DataFormatError: with the 1-based file line and the column name.
    """
    path = str(path)
    try:
        raw = pd.read_csv(path, dtype=str, keep_default_na=False)
    except pd.errors.ParserError as e:
        match = _LINE_IN_MESSAGE.search(str(e))
        line = int(match.group(1)) if match else 0
        raise DataFormatError(path, line, '*', 'wrong number of fields') from e
    except pd.errors.EmptyDataError as e:
        raise DataFormatError(path, 1, '*', 'file is empty') from e
    except FileNotFoundError as e:
        raise DataFormatError(path, 0, '*', 'file not found') from e

    columns = list(raw.columns)
    if expected_columns is not None and columns != list(expected_columns):
        for position, name in enumerate(expected_columns):
            if position >= len(columns) or columns[position] != name:
                raise DataFormatError(path, 1, name, f"header mismatch, got {columns}")
        raise DataFormatError(path, 1, columns[len(expected_columns)], "unexpected extra column")
    if raw.empty:
        raise DataFormatError(path, 2, '*', 'no data rows')

    text_columns = set(text_columns)
    parsed: Dict[str, object] = {}
    for name in columns:
        cells = raw[name].tolist()
        if name in text_columns:
            parsed[name] = cells
            continue
        values = np.empty(len(cells))
        for row, cell in enumerate(cells):
            if not isinstance(cell, str):
                raise DataFormatError(path, row + 2, name, "missing value")
            try:
                values[row] = float(cell)
            except ValueError as e:
                raise DataFormatError(path, row + 2, name, f"not a number: '{cell}'") from e
        parsed[name] = values
    return pd.DataFrame(parsed, columns=columns)


def write_key_values(entries: Dict[str, object], path: PathLike) -> None:
    """Plain-text ``key = value`` record, one entry per line, keys in given order."""
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    lines = [f"{key} = {_format_value(value)}" for key, value in entries.items()]
    Path(path).write_text("\n".join(lines) + "\n", encoding='utf-8')


def read_key_values(path: PathLike) -> Dict[str, str]:
    entries: Dict[str, str] = {}
    try:
        text = Path(path).read_text(encoding='utf-8')
    except FileNotFoundError as e:
        raise DataFormatError(str(path), 0, '*', 'metadata file not found') from e
    for number, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith('#'):
            continue
        if '=' not in stripped:
            raise DataFormatError(str(path), number, stripped, "expected 'key = value'")
        key, value = (part.strip() for part in stripped.split('=', 1))
        entries[key] = value
    return entries


def _format_value(value: object) -> str:
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if isinstance(value, float):
        return FLOAT_FORMAT % value
    return str(value)
