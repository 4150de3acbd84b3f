"""Post-hoc plotting of exterior-wave CSV outputs.

Reads the run CSVs by their documented column names and paints one image
per plot spec.  Nothing in this package recomputes physics: every fitted
value it annotates comes from a CSV column written by the run itself.
"""

from .plotspec import KINDS, PlotSpec, SpecError, load_spec
from .render import MissingColumnsError, RenderResult, render

__all__ = [
    "KINDS",
    "MissingColumnsError",
    "PlotSpec",
    "RenderResult",
    "SpecError",
    "load_spec",
    "render",
]
