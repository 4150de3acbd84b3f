"""Delimited output: CSV tables and the run manifest.

Floats are printed with 17 significant digits so a CSV round-trips the
underlying doubles exactly; the manifest records the fully resolved
config (every default spelled out) and a sha256 per table so reruns can
be compared byte for byte.  Tables are built in memory and written in
one shot: a failed run leaves no partial file behind.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

import numpy as np


def format_value(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return "%.17g" % float(x)
    return str(x)


def render_csv(header, rows) -> str:
    lines = [",".join(header)]
    for row in rows:
        if len(row) != len(header):
            raise ValueError(f"row width {len(row)} != header width {len(header)}")
        lines.append(",".join(format_value(x) for x in row))
    return "\n".join(lines) + "\n"


def write_csv(path: Path, header, rows) -> str:
    text = render_csv(header, rows)
    path.write_text(text)
    return hashlib.sha256(text.encode()).hexdigest()


def write_manifest(path: Path, subcommand: str, config: dict, csv_hashes: dict, figures) -> None:
    payload = {
        "subcommand": subcommand,
        "config": config,
        "outputs": csv_hashes,
        "figures": sorted(figures),
    }
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
