"""Figure rendering for stats and evaluation reports (headless backend)."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .lexstats import SCORE_BIN_LABELS, SIZE_CATEGORIES


def _bar_figure(labels, values, title, ylabel, path, color="#4878a8"):
    fig, ax = plt.subplots(figsize=(6.4, 3.6))
    ax.bar(range(len(labels)), values, color=color)
    ax.set_xticks(range(len(labels)))
    ax.set_xticklabels(labels, rotation=20, ha="right", fontsize=8)
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def save_score_bins(bins: dict, path: Path) -> None:
    percent = bins["percent"]
    _bar_figure(
        SCORE_BIN_LABELS,
        [percent[l] for l in SCORE_BIN_LABELS],
        f"Row score distribution (n={bins['count']})",
        "% of rows",
        path,
    )


def save_row_sizes(sizes: dict, path: Path) -> None:
    percent = sizes["percent"]
    _bar_figure(
        SIZE_CATEGORIES,
        [percent[l] for l in SIZE_CATEGORIES],
        f"Row size distribution (n={sizes['count']})",
        "% of rows",
        path,
        color="#6a9955",
    )


def save_categories(categories: dict, path: Path) -> None:
    names = ["O", "O_rmv", "A", "A_add"]
    function = [categories[n]["function"] for n in names]
    content = [categories[n]["content"] for n in names]
    fig, ax = plt.subplots(figsize=(6.4, 3.6))
    xs = range(len(names))
    ax.bar([x - 0.2 for x in xs], function, width=0.4, label="function", color="#4878a8")
    ax.bar([x + 0.2 for x in xs], content, width=0.4, label="content", color="#c2703d")
    ax.set_xticks(list(xs))
    ax.set_xticklabels(names)
    ax.set_ylabel("% of word types")
    ax.set_title("Function vs content words")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def render_stats_figures(report: dict, out_dir: str | Path) -> list[Path]:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = [
        out_dir / "score_bins.png",
        out_dir / "row_sizes.png",
        out_dir / "categories.png",
    ]
    save_score_bins(report["score_bins"], paths[0])
    save_row_sizes(report["row_sizes"], paths[1])
    save_categories(report["categories"], paths[2])
    return paths


def render_eval_figures(aggregated: dict, out_dir: str | Path) -> list[Path]:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    macro = aggregated["macro"]
    path = out_dir / "eval_scores.png"
    _bar_figure(
        ["r_l", "prsv", "rmv", "add"],
        [macro["r_l"], macro["prsv"], macro["rmv"], macro["add"]],
        f"Evaluation scores, per-chapter mean ({aggregated['chapters']} chapters)",
        "F1",
        path,
        color="#8458a8",
    )
    return [path]
