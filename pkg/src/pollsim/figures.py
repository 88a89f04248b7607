"""Figure rendering for the report paths.

Each CLI report that writes delimited output can also render a matplotlib
figure of the same data next to it. Rendering is file-based (Agg backend);
nothing here opens a window.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .stats import CapacityResult, Histogram
from .sweep import SweepResult


def save_distribution_figure(
    max_wait_hist: Histogram, close_delay_hist: Histogram, path: Path
) -> Path:
    """Two-panel peak-normalized histograms of max wait and closing delay."""
    fig, axes = plt.subplots(1, 2, figsize=(9, 3.5), sharey=True)
    for ax, hist, label in (
        (axes[0], max_wait_hist, "maximum wait (min)"),
        (axes[1], close_delay_hist, "closing delay (min)"),
    ):
        ax.stairs(hist.normalized_peak, hist.bin_edges, fill=True, alpha=0.6)
        ax.set_xlabel(label)
        ax.set_ylim(0, 1.05)
    axes[0].set_ylabel("count / peak count")
    fig.suptitle("Distribution across simulated election days")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def save_trace_figure(traces, day_minutes: float, path: Path) -> Path:
    """Panel per worst-day replication: wait level with queue length behind it.

    ``traces`` is a list of (replication_index, minutes, queue_length, wait).
    """
    k = len(traces)
    cols = 2 if k > 1 else 1
    rows = (k + cols - 1) // cols
    fig, axes = plt.subplots(rows, cols, figsize=(5.5 * cols, 2.8 * rows), squeeze=False)
    for slot, (rep, minutes, queue, wait) in enumerate(traces):
        ax = axes[slot // cols][slot % cols]
        ax.plot(minutes, wait, lw=1.2, label="wait of arriving voter")
        twin = ax.twinx()
        twin.fill_between(minutes, queue, color="tab:gray", alpha=0.25, step="mid")
        twin.set_ylabel("in line", color="tab:gray")
        ax.axvline(day_minutes, color="tab:red", ls=":", lw=1)
        ax.set_title(f"replication {rep}")
        ax.set_xlabel("minute of day")
        ax.set_ylabel("wait (min)")
    for slot in range(k, rows * cols):
        axes[slot // cols][slot % cols].axis("off")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def save_threshold_figure(result: CapacityResult, path: Path) -> Path:
    """Probe curve from the capacity search: P(wait over limit) vs load."""
    fig, ax = plt.subplots(figsize=(6, 4))
    probes = sorted(result.probes)
    ax.plot([v for v, _ in probes], [p for _, p in probes], "o-", ms=4, lw=1)
    ax.axhline(result.prob_limit, color="tab:red", ls="--", lw=1, label="probability limit")
    if result.voters_per_device > 0:
        ax.axvline(result.voters_per_device, color="tab:green", ls=":", lw=1.5,
                   label=f"threshold = {result.voters_per_device}")
    ax.set_xlabel("voters per device")
    ax.set_ylabel(f"P(max wait > {result.wait_limit:g} min)")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def save_sweep_figure(result: SweepResult, path: Path) -> Path:
    """Render a sweep: lines for one axis, contours plus overlay for two."""
    if result.axis2_name is None:
        return _sweep_lines(result, path)
    return _sweep_contours(result, path)


def _sweep_lines(result: SweepResult, path: Path) -> Path:
    fig, ax = plt.subplots(figsize=(6, 4))
    xs = [p.axis1_value for p in result.points]
    labels = [label for label, _, _ in result.points[0].values]
    for i, label in enumerate(labels):
        ys = [p.values[i][1] for p in result.points]
        errs = [p.values[i][2] for p in result.points]
        ax.errorbar(xs, ys, yerr=errs, marker="o", ms=3, lw=1.2, label=label)
    ax.set_xlabel(result.axis1_name.replace("_", " "))
    ax.set_ylabel("estimate")
    if all(v >= 0 for p in result.points for _, v, _ in p.values):
        positive = [v for p in result.points for _, v, _ in p.values if v > 0]
        if positive and max(positive) / min(positive) > 50:
            ax.set_yscale("log")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def _sweep_contours(result: SweepResult, path: Path) -> Path:
    xs = sorted({p.axis1_value for p in result.points})
    ys = sorted({p.axis2_value for p in result.points})
    labels = [label for label, _, _ in result.points[0].values]
    grid = np.empty((len(labels), len(ys), len(xs)))
    for p in result.points:
        i = xs.index(p.axis1_value)
        j = ys.index(p.axis2_value)
        for s, (_, value, _) in enumerate(p.values):
            grid[s, j, i] = value

    fig, ax = plt.subplots(figsize=(6.5, 5))
    filled = ax.contourf(xs, ys, grid[0], levels=10, cmap="viridis")
    fig.colorbar(filled, ax=ax, label=labels[0])
    if grid.max() <= 1.0:
        # probability surfaces also get a half-probability line per threshold
        for s, label in enumerate(labels):
            cs = ax.contour(xs, ys, grid[s], levels=[0.5], colors="white", linewidths=1)
            if any(len(seg) for seg in cs.allsegs):
                ax.clabel(cs, fmt={0.5: f"{label}=0.5"}, fontsize=7)
    if result.overlay:
        xlim, ylim = ax.get_xlim(), ax.get_ylim()
        # overlay pairs are (vote_minutes, voters_per_server); orient to axes
        ov_vote = [v for v, _ in result.overlay]
        ov_voters = [w for _, w in result.overlay]
        if result.axis1_name == "vote_minutes":
            ax.plot(ov_vote, ov_voters, "r--", lw=2, label="queue-stop rule")
        else:
            ax.plot(ov_voters, ov_vote, "r--", lw=2, label="queue-stop rule")
        ax.set_xlim(xlim)
        ax.set_ylim(ylim)
        ax.legend(loc="upper right", fontsize=8)
    ax.set_xlabel(result.axis1_name.replace("_", " "))
    ax.set_ylabel(result.axis2_name.replace("_", " "))
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
