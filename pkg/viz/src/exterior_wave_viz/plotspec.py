"""Plot specification: which CSV to read, what to draw, where to write."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

KINDS = ("decay", "energy", "scaling")

_REQUIRED_KEYS = ("input", "kind", "output")
_OPTIONAL_KEYS = ("reference_exponent",)


class SpecError(ValueError):
    """The spec file does not describe a valid plot."""


@dataclass(frozen=True)
class PlotSpec:
    input: Path
    kind: str
    output: Path
    reference_exponent: float | None = None

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise SpecError(f"kind must be one of {KINDS}, got {self.kind!r}")
        if self.reference_exponent is not None and not isinstance(
            self.reference_exponent, float
        ):
            raise SpecError("reference_exponent must be a number")


def load_spec(path) -> PlotSpec:
    """Parse a JSON spec file; unknown keys are errors, not warnings."""
    try:
        raw = json.loads(Path(path).read_text())
    except OSError as exc:
        raise SpecError(f"cannot read spec file: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise SpecError(f"spec file is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise SpecError("spec must be a JSON object")

    unknown = sorted(set(raw) - set(_REQUIRED_KEYS) - set(_OPTIONAL_KEYS))
    if unknown:
        raise SpecError(f"unknown spec keys: {', '.join(unknown)}")
    missing = sorted(set(_REQUIRED_KEYS) - set(raw))
    if missing:
        raise SpecError(f"missing spec keys: {', '.join(missing)}")

    for key in ("input", "kind", "output"):
        if not isinstance(raw[key], str) or not raw[key]:
            raise SpecError(f"{key} must be a non-empty string")
    ref = raw.get("reference_exponent")
    if ref is not None:
        # bool passes isinstance(x, int); it is never a sensible exponent
        if isinstance(ref, bool) or not isinstance(ref, (int, float)):
            raise SpecError("reference_exponent must be a number")
        ref = float(ref)

    return PlotSpec(
        input=Path(raw["input"]),
        kind=raw["kind"],
        output=Path(raw["output"]),
        reference_exponent=ref,
    )
