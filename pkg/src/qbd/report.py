"""File outputs for decision reports: delimited plot data plus rendered figures.

Figures are written headlessly (Agg backend) next to the CSV so a report run
leaves both the numbers and the picture on disk.
"""

from __future__ import annotations

import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402  (backend must be pinned first)


def write_plot_data(path, labels, probabilities) -> Path:
    """CSV of (action label, probability) rows for the action-distribution bars."""
    path = Path(path)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["action", "probability"])
        for label, p in zip(labels, probabilities):
            writer.writerow([label, f"{float(p):.12g}"])
    return path


def render_action_bars(path, labels, probabilities, theoretical=None,
                       title="Action distribution") -> Path:
    """Bar chart of the action distribution, optionally against the exact one."""
    path = Path(path)
    fig, ax = plt.subplots(figsize=(6, 4))
    x = range(len(labels))
    if theoretical is not None:
        width = 0.38
        ax.bar([i - width / 2 for i in x], probabilities, width, label="estimated")
        ax.bar([i + width / 2 for i in x], theoretical, width, label="exact", alpha=0.7)
        ax.legend()
    else:
        ax.bar(list(x), probabilities)
    ax.set_xticks(list(x))
    ax.set_xticklabels(labels, rotation=20, ha="right")
    ax.set_ylabel("probability")
    ax.set_ylim(0, 1)
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def plot_sidecar(data_path) -> Path:
    """Figure path rendered alongside a given CSV path."""
    data_path = Path(data_path)
    return data_path.with_suffix(".png")
