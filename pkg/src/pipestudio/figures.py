"""Matplotlib renderings for the report paths (written to files, never shown)."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from .corpus.formulate import BUCKETS, CATEGORIES
from .evaluation import EvalReport


def save_param_stats_figure(stats: dict, path: str | Path) -> Path:
    """Grouped bar chart of the hybrid parameter distribution buckets."""
    path = Path(path)
    dist = stats["distribution"]
    fig, ax = plt.subplots(figsize=(6.4, 3.6))
    width = 0.8 / len(BUCKETS)
    xs = range(len(CATEGORIES))
    for bi, bucket in enumerate(BUCKETS):
        offsets = [x + (bi - (len(BUCKETS) - 1) / 2) * width for x in xs]
        ax.bar(offsets, [dist[cat][bucket] for cat in CATEGORIES], width=width, label=bucket)
    ax.set_xticks(list(xs))
    ax.set_xticklabels([c.capitalize() for c in CATEGORIES])
    ax.set_ylabel("% of samples")
    ax.set_title(f"Hybrid parameter distribution ({stats['samples']} samples)")
    ax.legend(title="parameters")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def save_eval_figure(reports: dict[str, EvalReport], path: str | Path) -> Path:
    """Bar chart of accuracies, one bar per labeled run."""
    path = Path(path)
    labels = list(reports)
    values = [100.0 * reports[label].accuracy for label in labels]
    fig, ax = plt.subplots(figsize=(6.4, 3.6))
    bars = ax.bar(range(len(labels)), values, color="#5b8dd9")
    ax.bar_label(bars, fmt="%.1f")
    ax.set_xticks(range(len(labels)))
    ax.set_xticklabels(labels, rotation=20, ha="right")
    ax.set_ylabel("accuracy (%)")
    ax.set_ylim(0, 105)
    ax.set_title("Top-k accuracy")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
