"""Figure rendering for the run reports (Agg backend, files only).

Each function takes arrays already computed by the runner and paints one
PNG next to the CSVs; nothing here recomputes physics.  Figures carry no
timestamps so reruns produce stable bytes for a fixed matplotlib.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

_SAVE = {"dpi": 150, "metadata": {"Software": None}}


def decay_figure(path: Path, series: dict, title: str = "sup-norm decay") -> None:
    """series: N -> (t array, sup array, fitted slope, fitted constant)."""
    fig, ax = plt.subplots(figsize=(6.0, 4.2))
    for N, (t, sup, slope, const) in sorted(series.items()):
        (line,) = ax.loglog(t, sup, "o", label=f"N = {N:g}, slope {slope:+.3f}")
        tt = np.linspace(t[0], t[-1], 64)
        ax.loglog(tt, const * tt ** slope, "--", color=line.get_color(), alpha=0.6)
    ax.set_xlabel("t")
    ax.set_ylabel("sup |u(t)|")
    ax.set_title(title)
    ax.grid(True, which="both", alpha=0.3)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, **_SAVE)
    plt.close(fig)


def energy_figure(path: Path, t: np.ndarray, E: np.ndarray, title: str = "energy") -> None:
    fig, ax = plt.subplots(figsize=(6.0, 4.2))
    ax.plot(t, E, "-")
    ax.set_xlabel("t")
    ax.set_ylabel("E(t)")
    ax.set_title(title)
    ax.grid(True, alpha=0.3)
    if E.size and E[0] != 0.0:
        drift = np.abs(E - E[0]).max() / abs(E[0])
        ax.text(0.02, 0.95, f"max relative drift {drift:.2e}", transform=ax.transAxes, va="top")
    fig.tight_layout()
    fig.savefig(path, **_SAVE)
    plt.close(fig)


def ratio_figure(path: Path, T: np.ndarray, ratio: np.ndarray, title: str) -> None:
    fig, ax = plt.subplots(figsize=(6.0, 4.2))
    ax.semilogx(T, ratio, "o-")
    ax.set_xlabel("T")
    ax.set_ylabel("ratio")
    ax.set_title(title)
    ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, **_SAVE)
    plt.close(fig)


def scaling_figure(path: Path, J: np.ndarray, series: dict, title: str = "dyadic scaling") -> None:
    """series: label -> (values array, fitted slope per unit J)."""
    fig, ax = plt.subplots(figsize=(6.0, 4.2))
    for label, (vals, slope) in sorted(series.items()):
        ax.plot(J, np.log2(np.maximum(vals, 1e-300)), "o-", label=f"{label}, slope {slope:+.3f}")
    ax.set_xlabel("J")
    ax.set_ylabel("log2 value")
    ax.set_title(title)
    ax.grid(True, alpha=0.3)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, **_SAVE)
    plt.close(fig)


def residual_figure(path: Path, labels, values, title: str = "self-test residuals") -> None:
    fig, ax = plt.subplots(figsize=(7.0, 4.2))
    y = np.maximum(np.abs(np.asarray(values, dtype=float)), 1e-18)
    ax.bar(range(len(labels)), y, log=True)
    ax.axhline(1e-12, color="red", ls="--", alpha=0.6, label="1e-12")
    ax.set_xticks(range(len(labels)))
    ax.set_xticklabels(labels, rotation=60, ha="right", fontsize=7)
    ax.set_ylabel("residual")
    ax.set_title(title)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, **_SAVE)
    plt.close(fig)
