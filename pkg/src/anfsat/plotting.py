"""Figure for the bench table: mean conflicts and runtime per configuration."""

from __future__ import annotations

from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .bench import TableRow  # noqa: E402

STATUS_COLOURS = {"SAT": "#4c72b0", "UNSAT": "#c44e52"}


def plot_table(rows: Sequence[TableRow], path: str, title: str = "") -> None:
    """Two log-scale grouped bar panels (conflicts, time), one bar per status."""
    configs = list(dict.fromkeys(r.config for r in rows))
    fig, axes = plt.subplots(1, 2, figsize=(10, 3.8))
    width = 0.38
    for ax, attr, label in ((axes[0], "mean_conflicts", "mean conflicts"),
                            (axes[1], "mean_time_s", "mean time (s)")):
        for k, status in enumerate(("SAT", "UNSAT")):
            vals = {r.config: getattr(r, attr) for r in rows if r.status == status}
            xs = [i + (k - 0.5) * width for i, c in enumerate(configs) if c in vals]
            ys = [max(vals[c], 1e-6) for c in configs if c in vals]
            if xs:
                ax.bar(xs, ys, width, label=status, color=STATUS_COLOURS[status])
        ax.set_xticks(range(len(configs)))
        ax.set_xticklabels(configs, rotation=30, ha="right")
        ax.set_ylabel(label)
        ax.set_yscale("log")
        ax.grid(axis="y", alpha=0.3)
    if rows:
        axes[0].legend(frameon=False)
    if title:
        fig.suptitle(title)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
