"""Static SVG figures of dictionaries and closed-loop runs."""
from pathlib import Path
from typing import Dict, Union
import matplotlib

matplotlib.use('Agg')
import matplotlib.pyplot as plt  # noqa: E402

from ..control import TrajectoryLog  # noqa: E402
from ..plantlab import DataDictionary  # noqa: E402

FIGSIZE = (8.0, 7.0)
SVG_METADATA = {'Date': None}
plt.rcParams['svg.hashsalt'] = 'dpc-bench'

PathLike = Union[str, Path]


def _save(fig, path: PathLike) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.tight_layout()
    fig.savefig(path, format='svg', metadata=SVG_METADATA)
    plt.close(fig)
    return path


def plot_dictionary(dictionary: DataDictionary, path: PathLike, title: str = 'data dictionary') -> Path:
    k = range(1, dictionary.n_d + 1)
    fig, axes = plt.subplots(3, 1, sharex=True, figsize=FIGSIZE)
    axes[0].plot(k, dictionary.y.values, marker='.', linewidth=1.0)
    axes[0].set_ylabel('y')
    axes[1].step(k, dictionary.u.values, where='post', linewidth=1.0)
    axes[1].set_ylabel('u')
    if dictionary.n_p:
        axes[2].plot(k, dictionary.p.values, marker='.', linewidth=1.0)
    axes[2].set_ylabel('p')
    axes[2].set_xlabel('k')
    axes[0].set_title(title)
    for ax in axes:
        ax.grid(True, linewidth=0.3)
    return _save(fig, path)


def _trajectory_axes(axes, log: TrajectoryLog, label: str, reference: bool) -> None:
    t = log.column('t')
    if reference:
        axes[0].step(t, log.column('r'), where='post', color='black', linestyle='--', linewidth=1.0, label='r')
    axes[0].plot(t, log.column('y'), linewidth=1.2, label=f'y ({label})')
    axes[1].step(t, log.column('u'), where='post', linewidth=1.2, label=f'u ({label})')
    p = log.column('p')
    if p.size:
        axes[2].plot(t, p, linewidth=1.2, label=f'p ({label})')


def _decorate(axes, log: TrajectoryLog) -> None:
    for ax, name, box in ((axes[0], 'y', log.y_box), (axes[1], 'u', log.u_box)):
        for bound in list(box.lower) + list(box.upper):
            if abs(bound) != float('inf'):
                ax.axhline(bound, color='grey', linestyle=':', linewidth=0.8)
        ax.set_ylabel(name)
    axes[2].set_ylabel('p')
    axes[2].set_xlabel('t')
    for ax in axes:
        ax.grid(True, linewidth=0.3)
        ax.legend(loc='upper right', fontsize='small')


def plot_trajectory(log: TrajectoryLog, path: PathLike, title: str = '') -> Path:
    """Reference and output, input, scheduling of one run, constraint bounds dotted."""
    fig, axes = plt.subplots(3, 1, sharex=True, figsize=FIGSIZE)
    _trajectory_axes(axes, log, log.controller, reference=True)
    _decorate(axes, log)
    axes[0].set_title(title or log.controller)
    return _save(fig, path)


def plot_comparison(logs: Dict[str, TrajectoryLog], path: PathLike, title: str = '') -> Path:
    fig, axes = plt.subplots(3, 1, sharex=True, figsize=FIGSIZE)
    first = True
    for name, log in logs.items():
        _trajectory_axes(axes, log, name, reference=first)
        first = False
    _decorate(axes, next(iter(logs.values())))
    axes[0].set_title(title or ' vs '.join(logs))
    return _save(fig, path)
