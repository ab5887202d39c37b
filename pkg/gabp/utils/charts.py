"""SVG line charts for run artifacts.

Uses matplotlib's object API (no pyplot state), so charts can be drawn from
any thread. The SVG hash salt is fixed and the date stamp dropped, so equal
data gives byte-identical files.
"""

from pathlib import Path
from typing import Dict, Sequence, Tuple, Union

import matplotlib
import numpy as np
from matplotlib.figure import Figure

Series = Tuple[Sequence[float], Sequence[float]]

SVG_SETTINGS = {
    'svg.hashsalt': "gabp",
    'svg.fonttype': "none",
}


def line_chart(series: Dict[str, Series], title: str = "", x_label: str = "",
               y_label: str = "") -> Figure:
    """One line per series; non-finite points are dropped"""
    fig = Figure(figsize=(8, 4))
    ax = fig.add_subplot()
    for name, (xs, ys) in series.items():
        x = np.asarray(xs, dtype=float)
        y = np.asarray(ys, dtype=float)
        keep = np.isfinite(x) & np.isfinite(y)
        ax.plot(x[keep], y[keep], linewidth=1, label=name)

    ax.set_title(title)
    ax.set_xlabel(x_label)
    ax.set_ylabel(y_label)
    ax.grid(True, alpha=0.3)
    if len(series) > 1:
        ax.legend(loc="upper right")
    fig.tight_layout()
    return fig


def write_line_chart(path: Union[str, Path], series: Dict[str, Series], title: str = "",
                     x_label: str = "", y_label: str = "") -> Path:
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    fig = line_chart(series, title, x_label, y_label)
    with matplotlib.rc_context(SVG_SETTINGS):
        fig.savefig(target, format="svg", metadata={'Date': None})
    return target
