"""File-only figure rendering for sweep and simulation reports.

Figures are always written to disk next to the delimited output; nothing
here opens a window, and the module is only imported when a plot was asked
for.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

__all__ = ["plot_sweep", "plot_simulation"]


def plot_sweep(result, path: str) -> str:
    """Line plot of every numeric sweep metric against the swept variable."""
    spec = result.spec
    x = [row.value for row in result.rows]
    fig, ax = plt.subplots(figsize=(7, 4.5))
    plotted = 0
    for name in spec.outputs:
        y = [row.metrics.get(name) for row in result.rows]
        numeric = [(xi, yi) for xi, yi in zip(x, y)
                   if isinstance(yi, (int, float)) and not isinstance(yi, bool)]
        if not numeric:
            continue
        ax.plot([p[0] for p in numeric], [p[1] for p in numeric],
                marker="o", label=name)
        plotted += 1
    ax.set_xlabel(spec.variable)
    ax.set_ylabel("metric value")
    ax.grid(True, alpha=0.3)
    if plotted:
        ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def plot_simulation(recorded_counts, predicted, stats, path: str) -> str:
    """Histogram of recorded counts with empirical and predicted means."""
    counts = np.asarray(recorded_counts)
    fig, ax = plt.subplots(figsize=(7, 4.5))
    span = counts.max() - counts.min()
    if span <= 200:
        bins = np.arange(counts.min() - 0.5, counts.max() + 1.5)
    else:
        bins = 80
    ax.hist(counts, bins=bins, color="#4878a8", alpha=0.8, label="recorded counts")
    ax.axvline(stats.mean, color="#222222", lw=1.5, label=f"empirical mean {stats.mean:.4g}")
    if predicted is not None:
        ax.axvline(predicted.mean, color="#d62828", lw=1.5, ls="--",
                   label=f"predicted mean {predicted.mean:.4g}")
    fano = "n/a" if stats.fano is None else f"{stats.fano:.4g}"
    ax.set_xlabel("counts per window")
    ax.set_ylabel("windows")
    ax.set_title(f"fano {fano} over {stats.windows} windows")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
