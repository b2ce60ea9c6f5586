"""Figure rendering for experiment outputs (PNG next to the CSV files)."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt


def render_summary_figure(path, label: str, rows, ylabel: str) -> None:
    """rows: (k, value, stddev) triples for one algorithm."""
    ks = [r[0] for r in rows]
    vals = [r[1] for r in rows]
    errs = [r[2] for r in rows]
    fig, ax = plt.subplots(figsize=(5.2, 3.2))
    ax.errorbar(ks, vals, yerr=errs, marker="s", capsize=3, label=label)
    ax.set_xlabel("k")
    ax.set_ylabel(ylabel)
    ax.grid(True, linestyle=":", linewidth=0.6)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_timestep_figure(path, label: str, rows, ylabel: str) -> None:
    """rows: (block index, value) pairs for one algorithm."""
    ts = [r[0] for r in rows]
    vals = [r[1] for r in rows]
    fig, ax = plt.subplots(figsize=(5.2, 3.2))
    ax.plot(ts, vals, linewidth=1.2, label=label)
    ax.set_xlabel("time step")
    ax.set_ylabel(ylabel)
    ax.grid(True, linestyle=":", linewidth=0.6)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
