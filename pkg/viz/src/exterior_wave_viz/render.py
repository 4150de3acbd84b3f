"""Rendering: one CSV in, one raster image out, nothing recomputed.

Every value drawn or annotated comes straight from a CSV column; the
only arithmetic here is axis scaling and the anchoring of reference
lines, so the run that wrote the CSV stays the sole source of truth for
all fitted numbers.  Output is written atomically: the image appears
only after a successful full render, never as a partial file.
"""

from __future__ import annotations

import csv
import os
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .plotspec import PlotSpec

_SAVE = {"dpi": 150, "metadata": {"Software": None}}

REQUIRED_COLUMNS = {
    "decay": ("t", "sup_norm", "fitted_slope"),
    "energy": ("t", "energy", "rel_drift"),
    "scaling": ("J", "T", "E_T", "hs_sup", "fit_E_T_vs_J", "fit_hs_sup_vs_log2T"),
}


class MissingColumnsError(ValueError):
    """The input CSV lacks columns the plot kind draws from."""


@dataclass(frozen=True)
class RenderResult:
    path: Path
    annotations: dict


def _load_table(path: Path) -> dict:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"{path}: empty CSV") from None
        columns = {name: [] for name in header}
        for i, row in enumerate(reader, start=2):
            if len(row) != len(header):
                raise ValueError(f"{path}:{i}: expected {len(header)} cells, got {len(row)}")
            for name, cell in zip(header, row):
                columns[name].append(cell)
    if not next(iter(columns.values()), []):
        raise ValueError(f"{path}: no data rows")
    return columns


def _floats(columns: dict, name: str) -> np.ndarray:
    return np.array([float(cell) for cell in columns[name]])


def _check_columns(columns: dict, kind: str) -> None:
    missing = [c for c in REQUIRED_COLUMNS[kind] if c not in columns]
    if missing:
        raise MissingColumnsError(f"missing columns for {kind} plot: {', '.join(missing)}")


def _decay(columns: dict, spec: PlotSpec):
    t = _floats(columns, "t")
    sup = _floats(columns, "sup_norm")
    slope = _floats(columns, "fitted_slope")
    if "N" in columns:
        Ns = _floats(columns, "N")
        groups = [(N, Ns == N) for N in sorted(set(Ns))]
    else:
        groups = [(None, np.ones(t.size, dtype=bool))]

    fig, ax = plt.subplots(figsize=(6.0, 4.2))
    annotations = {}
    for N, mask in groups:
        fitted = slope[mask][0]
        tag = f"slope {fitted:+.3f}"
        ax.loglog(t[mask], sup[mask], "o-", label=tag if N is None else f"N = {N:g}, {tag}")
        key = "fitted_slope" if N is None else f"fitted_slope_N{N:g}"
        annotations[key] = float(fitted)
    if spec.reference_exponent is not None:
        ref = spec.reference_exponent
        t0, s0 = t[groups[0][1]][0], sup[groups[0][1]][0]
        tt = np.linspace(t.min(), t.max(), 64)
        ax.loglog(tt, s0 * (tt / t0) ** ref, "k--", alpha=0.6, label=f"reference t^{ref:g}")
        annotations["reference_exponent"] = float(ref)
    ax.set_xlabel("t")
    ax.set_ylabel("sup norm")
    ax.set_title("dispersive decay")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend(fontsize=8)
    return fig, annotations


def _energy(columns: dict, spec: PlotSpec):
    t = _floats(columns, "t")
    E = _floats(columns, "energy")
    drift = float(_floats(columns, "rel_drift").max())

    fig, ax = plt.subplots(figsize=(6.0, 4.2))
    ax.plot(t, E, "-")
    ax.set_xlabel("t")
    ax.set_ylabel("E(t)")
    ax.set_title("energy trace")
    ax.grid(True, alpha=0.3)
    ax.text(0.02, 0.95, f"max relative drift {drift:.3g}", transform=ax.transAxes, va="top")
    return fig, {"max_rel_drift": drift}


def _scaling(columns: dict, spec: PlotSpec):
    J = _floats(columns, "J")
    T = _floats(columns, "T")
    E_T = _floats(columns, "E_T")
    hs = _floats(columns, "hs_sup")
    # fits repeat on every row; the first cell carries the sweep value
    e_slope = float(_floats(columns, "fit_E_T_vs_J")[0])
    hs_slope = float(_floats(columns, "fit_hs_sup_vs_log2T")[0])

    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9.0, 4.0))
    ax1.plot(J, E_T, "o-", label=f"slope {e_slope:+.3f} per unit J")
    ax1.set_yscale("log", base=2)
    ax1.set_xlabel("J")
    ax1.set_ylabel("E_T")
    ax1.set_title("peak energy vs cutoff")
    ax1.grid(True, which="both", alpha=0.3)
    ax1.legend(fontsize=8)

    ax2.loglog(T, hs, "o-", base=2, label=f"fitted exponent {hs_slope:+.3f}")
    annotations = {"fit_E_T_vs_J": e_slope, "fit_hs_sup_vs_log2T": hs_slope}
    if spec.reference_exponent is not None:
        ref = spec.reference_exponent
        ax2.loglog(
            T,
            hs[0] * (T / T[0]) ** ref,
            "k--",
            base=2,
            alpha=0.6,
            label=f"reference exponent {ref:g}",
        )
        annotations["reference_exponent"] = float(ref)
    ax2.set_xlabel("T")
    ax2.set_ylabel("sup Sobolev norm")
    ax2.set_title("norm growth vs horizon")
    ax2.grid(True, which="both", alpha=0.3)
    ax2.legend(fontsize=8)
    return fig, annotations


_BUILDERS = {"decay": _decay, "energy": _energy, "scaling": _scaling}


def render(spec: PlotSpec) -> RenderResult:
    """Paint the plot described by spec; returns the annotated values.

    Column validation runs before any output I/O and the image is moved
    into place only after a complete save, so a failed render leaves no
    file behind.
    """
    columns = _load_table(spec.input)
    _check_columns(columns, spec.kind)
    fig, annotations = _BUILDERS[spec.kind](columns, spec)
    fig.tight_layout()
    tmp = spec.output.with_name(spec.output.name + ".tmp")
    fmt = spec.output.suffix.lstrip(".").lower() or "png"
    try:
        fig.savefig(tmp, format=fmt, **_SAVE)
        os.replace(tmp, spec.output)
    finally:
        plt.close(fig)
        if tmp.exists():
            tmp.unlink()
    return RenderResult(path=spec.output, annotations=annotations)
