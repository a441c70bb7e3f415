"""Matplotlib settings and helpers for the report figures."""
from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

STYLE = {
    "font.size": 9,
    "axes.labelsize": 9,
    "axes.titlesize": 9,
    "legend.fontsize": 7,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "lines.linewidth": 1.2,
    "lines.markersize": 4,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "savefig.dpi": 150,
    "savefig.bbox": "tight",
}


def figure_size(scale: float = 1.0) -> tuple[float, float]:
    width = 5.0 * scale
    return width, width * (math.sqrt(5.0) - 1.0) / 2.0


def new_figure(scale: float = 1.0):
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=figure_size(scale))
    return fig, ax


def errorbar_series(ax, x, mean, lo, hi, label):
    # missing CI bounds draw as zero-length bars
    lower = [m - l if l is not None else 0.0 for m, l in zip(mean, lo)]
    upper = [h - m if h is not None else 0.0 for m, h in zip(mean, hi)]
    ax.errorbar(x, mean, yerr=[lower, upper], marker="o", capsize=2, label=label)


def save(fig, path) -> None:
    with plt.rc_context(STYLE):
        fig.savefig(path)
    plt.close(fig)
