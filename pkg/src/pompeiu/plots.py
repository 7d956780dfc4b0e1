"""Figure rendering for CLI reports.

Every report-writing command can drop a PNG next to its JSON/CSV output;
figures are simple, deterministic and file-based (Agg backend, no display).
"""

from __future__ import annotations

from pathlib import Path
from typing import Sequence, Union

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

__all__ = [
    "save_trace_figure",
    "save_invariance_figure",
    "save_demo_figure",
]

_DPI = 150


def _shade_intervals(ax, intervals: Sequence[tuple[float, float]]) -> None:
    for lo, hi in intervals:
        ax.axvspan(lo, hi, color="tab:orange", alpha=0.18, lw=0)


def save_trace_figure(
    path: Union[str, Path],
    xs: Sequence[float],
    ys: Sequence[float],
    intervals: Sequence[tuple[float, float]] = (),
    title: str = "constructed function",
) -> Path:
    fig, ax = plt.subplots(figsize=(8, 3.2))
    ax.plot(xs, ys, lw=1.2, color="tab:blue")
    _shade_intervals(ax, intervals)
    ax.set_xlabel("x")
    ax.set_ylabel("f(x)")
    ax.set_title(title)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)
    return path


def save_invariance_figure(
    path: Union[str, Path],
    rows: Sequence[dict],
    c_estimate: float,
    title: str = "integral over sampled images",
) -> Path:
    fig, ax = plt.subplots(figsize=(8, 3.2))
    plain = [(r["t"], r["integral"]) for r in rows if not r["reflected"]]
    mirrored = [(r["t"], r["integral"]) for r in rows if r["reflected"]]
    if plain:
        ax.plot(*zip(*plain), ".", ms=3, color="tab:blue", label="translation")
    if mirrored:
        ax.plot(*zip(*mirrored), ".", ms=3, color="tab:red", label="reflected")
    ax.axhline(c_estimate, color="black", lw=0.8, ls="--", label="mean")
    ax.set_xlabel("translation t")
    ax.set_ylabel("integral")
    ax.set_title(title)
    ax.legend(loc="best", fontsize=8)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)
    return path


def save_demo_figure(path: Union[str, Path], checks: Sequence[dict]) -> Path:
    names = [c["name"] for c in checks]
    passed = [bool(c["passed"]) for c in checks]
    fig, ax = plt.subplots(figsize=(7, 0.45 * len(names) + 1.2))
    colors = ["tab:green" if ok else "tab:red" for ok in passed]
    ax.barh(range(len(names)), [1.0] * len(names), color=colors, alpha=0.75)
    for i, ok in enumerate(passed):
        ax.text(0.5, i, "pass" if ok else "FAIL", va="center", ha="center", fontsize=9)
    ax.set_yticks(range(len(names)))
    ax.set_yticklabels(names, fontsize=8)
    ax.set_xticks([])
    ax.invert_yaxis()
    ax.set_title("demo battery")
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)
    return path
