"""Save and reload a QpProblem as a directory of dense CSV matrices."""
from pathlib import Path
import numpy as np
import pandas as pd
from ..errors import DataFormatError
from ..utils.csv_io import PathLike, read_frame, write_frame
from .problem import QpProblem

FIELDS = ('P', 'q', 'Aeq', 'beq', 'Ain', 'lb', 'ub')
MANIFEST = 'manifest.csv'


def _matrix_frame(matrix: np.ndarray) -> pd.DataFrame:
    matrix = np.atleast_2d(matrix)
    return pd.DataFrame(matrix, columns=[f"c{j + 1}" for j in range(matrix.shape[1])])


def dump_problem(prob: QpProblem, directory: PathLike) -> Path:
    """Write every field of ``prob``; vectors are stored as one-column matrices.

    Empty fields are recorded only in the manifest.
    """
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    shapes = []
    for name in FIELDS:
        value = getattr(prob, name)
        matrix = value if value.ndim == 2 else value.reshape(-1, 1)
        shapes.append({'field': name, 'rows': matrix.shape[0], 'cols': matrix.shape[1]})
        if matrix.size:
            write_frame(_matrix_frame(matrix), directory / f"{name}.csv")
    shapes.append({'field': 'c0', 'rows': 1, 'cols': 1})
    write_frame(_matrix_frame(np.array([[prob.c0]])), directory / "c0.csv")
    write_frame(pd.DataFrame(shapes, columns=['field', 'rows', 'cols']), directory / MANIFEST)
    return directory


def load_problem(directory: PathLike) -> QpProblem:
    directory = Path(directory)
    manifest = read_frame(directory / MANIFEST, ['field', 'rows', 'cols'], text_columns=['field'])
    fields = {}
    for _, row in manifest.iterrows():
        name = row['field']
        rows, cols = int(row['rows']), int(row['cols'])
        if rows * cols == 0:
            fields[name] = np.zeros((rows, cols))
            continue
        path = directory / f"{name}.csv"
        frame = read_frame(path, [f"c{j + 1}" for j in range(cols)])
        if len(frame) != rows:
            raise DataFormatError(str(path), len(frame) + 1, '*', f"expected {rows} rows")
        fields[name] = frame.to_numpy(dtype=float)

    missing = [name for name in FIELDS + ('c0',) if name not in fields]
    if missing:
        raise DataFormatError(str(directory / MANIFEST), 0, '*', f"missing fields {missing}")
    n = fields['P'].shape[0]
    return QpProblem(
        P=fields['P'],
        q=fields['q'].reshape(-1),
        c0=float(fields['c0'][0, 0]),
        Aeq=fields['Aeq'].reshape(-1, n),
        beq=fields['beq'].reshape(-1),
        Ain=fields['Ain'].reshape(-1, n),
        lb=fields['lb'].reshape(-1),
        ub=fields['ub'].reshape(-1)
    )
