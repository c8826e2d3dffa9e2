"""Dictionary import/export: ``k,u_*,p_*,y_*`` CSV plus a ``key = value`` sidecar."""
from pathlib import Path
from typing import Any, Dict, List, Tuple
import numpy as np
import pandas as pd
from ..errors import DataFormatError
from ..signals import SignalSequence
from ..utils.csv_io import PathLike, read_frame, write_frame, read_key_values, write_key_values
from .dictionary import DataDictionary

RECIPE_PREFIX = 'recipe.'


def signal_columns(n_u: int, n_p: int, n_y: int) -> List[str]:
    return (
        ['k']
        + [f'u_{i}' for i in range(1, n_u + 1)]
        + [f'p_{i}' for i in range(1, n_p + 1)]
        + [f'y_{i}' for i in range(1, n_y + 1)]
    )


def metadata_path(csv_path: PathLike) -> Path:
    return Path(csv_path).with_suffix('.meta')


def signals_frame(u: SignalSequence, p: SignalSequence, y: SignalSequence) -> pd.DataFrame:
    columns = signal_columns(u.n_s, p.n_s, y.n_s)
    data = np.hstack([u.values, p.values, y.values])
    frame = pd.DataFrame(data, columns=columns[1:])
    frame.insert(0, 'k', np.arange(1, len(u) + 1))
    return frame


def split_signal_columns(
    frame: pd.DataFrame,
    path: str
) -> Tuple[SignalSequence, SignalSequence, SignalSequence]:
    """Split a ``k,u_*,p_*,y_*`` frame; checks the time column counts 1, 2, ..."""
    columns = list(frame.columns)
    counts = {prefix: sum(1 for c in columns if c.startswith(prefix)) for prefix in ('u_', 'p_', 'y_')}
    expected = signal_columns(counts['u_'], counts['p_'], counts['y_'])
    if columns != expected or counts['u_'] == 0 or counts['y_'] == 0:
        raise DataFormatError(path, 1, '*', f"expected header {expected}, got {columns}")
    k = frame['k'].to_numpy()
    steps = np.arange(1, len(frame) + 1)
    bad = np.flatnonzero(k != steps)
    if bad.size:
        raise DataFormatError(path, int(bad[0]) + 2, 'k', "time column must count 1, 2, ...")

    def block(prefix: str) -> SignalSequence:
        names = [c for c in columns if c.startswith(prefix)]
        return SignalSequence(frame[names].to_numpy(dtype=float).reshape(len(frame), len(names)))

    return block('u_'), block('p_'), block('y_')


def write_dictionary(dictionary: DataDictionary, csv_path: PathLike) -> Path:
    """Write the CSV and its sidecar; returns the sidecar path."""
    write_frame(signals_frame(dictionary.u, dictionary.p, dictionary.y), csv_path)
    meta: Dict[str, Any] = {
        'n_d': dictionary.n_d,
        'n_u': dictionary.n_u,
        'n_p': dictionary.n_p,
        'n_y': dictionary.n_y,
        'n_x': dictionary.n_x,
    }
    if 'seed' in dictionary.recipe:
        meta['seed'] = dictionary.recipe['seed']
    certificate = dictionary.certificate
    if certificate is not None:
        meta.update({
            'pe_order': certificate.order,
            'pe_rank': certificate.rank,
            'pe_required': certificate.required,
            'pe_passed': certificate.passed,
        })
    for key in sorted(dictionary.recipe):
        meta[RECIPE_PREFIX + key] = dictionary.recipe[key]
    sidecar = metadata_path(csv_path)
    write_key_values(meta, sidecar)
    return sidecar


def read_dictionary(csv_path: PathLike) -> DataDictionary:
    """Load a dictionary and recompute its lifted signals and certificate.

    The stored certificate must agree with the recomputed one; a mismatch
    means the CSV was edited after generation.
    """
    path = str(csv_path)
    u, p, y = split_signal_columns(read_frame(path), path)
    sidecar = metadata_path(csv_path)
    meta = read_key_values(sidecar)
    try:
        n_x = int(meta['n_x'])
        order = int(meta['pe_order']) if 'pe_order' in meta else None
    except (KeyError, ValueError) as e:
        raise DataFormatError(str(sidecar), 0, 'n_x', f"invalid or missing entry: {e}") from e
    if 'n_d' in meta and int(meta['n_d']) != len(u):
        raise DataFormatError(str(sidecar), 0, 'n_d', f"declares {meta['n_d']} samples, CSV has {len(u)}")

    recipe = {
        key[len(RECIPE_PREFIX):]: _parse_scalar(value)
        for key, value in meta.items() if key.startswith(RECIPE_PREFIX)
    }
    dictionary = DataDictionary.from_signals(u, p, y, n_x, order, recipe)
    if order is not None and 'pe_rank' in meta:
        stored = int(meta['pe_rank'])
        if stored != dictionary.certificate.rank:
            raise DataFormatError(
                str(sidecar), 0, 'pe_rank',
                f"stored rank {stored} differs from recomputed {dictionary.certificate.rank}"
            )
    return dictionary


def _parse_scalar(text: str) -> Any:
    if text in ('true', 'false'):
        return text == 'true'
    for cast in (int, float):
        try:
            return cast(text)
        except ValueError:
            continue
    return text
