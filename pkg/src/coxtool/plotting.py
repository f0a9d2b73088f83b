"""Figures written by the ``--figures`` option of the CLI."""
from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def _save(fig, directory, name) -> str:
    path = Path(directory) / name
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return str(path)


def plot_complex_statistics(stats: dict, directory) -> list[str]:
    """Chambers per length, and the root sizes met."""
    fig, (left, right) = plt.subplots(1, 2, figsize=(9, 3.5))
    counts = stats["chambers_by_length"]
    left.bar(range(len(counts)), counts, color="0.35")
    left.set_xlabel("length")
    left.set_ylabel("chambers")
    left.set_title("chambers by length")
    sizes = stats["root_sizes"]
    right.bar(range(len(sizes)), sizes, color="tab:blue")
    right.axhline(stats["chambers"] / 2, color="k", lw=0.8, ls="--")
    right.set_xticks(range(len(sizes)))
    right.set_xlabel("distinct root size")
    right.set_ylabel("chambers on the identity side")
    right.set_title("root sizes")
    return [_save(fig, directory, "complex_statistics.png")]


def plot_verify_orders(rows: list[tuple[str, int, int]], directory) -> list[str]:
    """Enumerated against tabulated group orders, one bar pair per subset."""
    if not rows:
        return []
    labels = [r[0] for r in rows]
    x = range(len(rows))
    fig, ax = plt.subplots(figsize=(max(4, 0.6 * len(rows)), 3.5))
    ax.bar([i - 0.2 for i in x], [r[1] for r in rows], width=0.4, label="enumerated")
    ax.bar([i + 0.2 for i in x], [r[2] for r in rows], width=0.4, label="table")
    ax.set_yscale("log")
    ax.set_xticks(list(x))
    ax.set_xticklabels(labels, rotation=60, ha="right", fontsize=8)
    ax.set_ylabel("order")
    ax.legend(frameon=False)
    return [_save(fig, directory, "verify_orders.png")]
