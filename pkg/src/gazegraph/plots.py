"""Figure rendering for the report: ROC curves, fixation bars, pattern mix.

Uses the non-interactive Agg backend so rendering works headless. Figures are
written atomically next to the delimited outputs; PNG metadata is pinned so
re-renders of identical data are byte-identical.
"""

from __future__ import annotations

import os
import tempfile

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

FIGURE_DPI = 120
_PNG_METADATA = {"Software": "gazegraph"}

METRIC_COLORS = {
    "pagerank": "tab:blue",
    "degree": "tab:orange",
    "betweenness": "tab:green",
    "closeness": "tab:red",
}


def _save(fig, path: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=".png")
    os.close(fd)
    try:
        fig.savefig(tmp, format="png", dpi=FIGURE_DPI, metadata=_PNG_METADATA, bbox_inches="tight")
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    finally:
        plt.close(fig)


def render_roc_curves(roc_summary: dict, path: str) -> None:
    """One panel per task, one curve per metric with its AUC in the legend."""
    tasks = sorted(roc_summary)
    if not tasks:
        return
    cols = min(2, len(tasks))
    rows = (len(tasks) + cols - 1) // cols
    fig, axes = plt.subplots(rows, cols, figsize=(5.5 * cols, 4.5 * rows), squeeze=False)
    for i, task in enumerate(tasks):
        ax = axes[i // cols][i % cols]
        for metric in sorted(roc_summary[task]):
            entry = roc_summary[task][metric]
            if entry.get("auc") is None:
                continue
            points = entry["points"]
            ax.plot(
                [p[1] for p in points],
                [p[2] for p in points],
                label=f"{metric} (AUC {entry['auc']:.3f})",
                color=METRIC_COLORS.get(metric),
            )
        ax.plot([0, 1], [0, 1], linestyle="--", color="gray", linewidth=0.8)
        ax.set_title(task)
        ax.set_xlabel("false positive rate")
        ax.set_ylabel("true positive rate")
        ax.legend(loc="lower right", fontsize=8)
    for j in range(len(tasks), rows * cols):
        axes[j // cols][j % cols].axis("off")
    fig.suptitle("Centrality vs. importance labels: ROC")
    _save(fig, path)


def render_fixation_bars(subjects: dict, path: str) -> None:
    """Grouped mean-fixation bars per subject with standard-error whiskers."""
    names = sorted(subjects)
    if not names:
        return
    means_imp = [subjects[s]["nodes"]["mean_important"] for s in names]
    means_non = [subjects[s]["nodes"]["mean_non_important"] for s in names]
    se_imp = [subjects[s]["nodes"]["se_important"] or 0.0 for s in names]
    se_non = [subjects[s]["nodes"]["se_non_important"] or 0.0 for s in names]

    fig, ax = plt.subplots(figsize=(max(6.0, 1.2 * len(names)), 4.5))
    xs = range(len(names))
    width = 0.38
    ax.bar([x - width / 2 for x in xs], means_imp, width, yerr=se_imp, capsize=3,
           label="important", color="tab:blue")
    ax.bar([x + width / 2 for x in xs], means_non, width, yerr=se_non, capsize=3,
           label="non-important", color="tab:gray")
    ax.set_xticks(list(xs))
    ax.set_xticklabels(names, rotation=45, ha="right")
    ax.set_ylabel("mean fixations per node")
    ax.set_title("Fixations on important vs. non-important nodes")
    ax.legend()
    _save(fig, path)


def render_pattern_bars(metrics_summary: dict, path: str) -> None:
    """Shape-pattern percentages per task (flags overlap, so no stacking)."""
    tasks = sorted(t for t in metrics_summary if t != "all")
    if not tasks:
        tasks = ["all"]
    patterns = ("star", "cycle", "path", "complete")
    fig, ax = plt.subplots(figsize=(max(6.0, 1.6 * len(tasks)), 4.5))
    width = 0.8 / len(patterns)
    for k, pattern in enumerate(patterns):
        values = [metrics_summary[t][f"{pattern}_pct"] for t in tasks]
        ax.bar([i + k * width for i in range(len(tasks))], values, width, label=pattern)
    ax.set_xticks([i + 1.5 * width for i in range(len(tasks))])
    ax.set_xticklabels(tasks)
    ax.set_ylabel("% of graphs carrying the flag")
    ax.set_title("Graph shape patterns by task")
    ax.legend()
    _save(fig, path)
