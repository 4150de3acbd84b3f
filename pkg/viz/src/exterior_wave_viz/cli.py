"""Command line entry: plot --spec <json>.

Exit codes: 0 rendered, 2 bad spec file, 1 anything wrong with the data
(missing CSV, missing columns, unparsable cells).
"""

from __future__ import annotations

import argparse
import sys

from .plotspec import SpecError, load_spec
from .render import MissingColumnsError, render


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="plot", description="Render one plot from a run CSV.")
    parser.add_argument("--spec", required=True, help="path to a JSON plot spec")
    args = parser.parse_args(argv)

    try:
        spec = load_spec(args.spec)
    except SpecError as exc:
        print(f"spec: {exc}", file=sys.stderr)
        return 2

    try:
        result = render(spec)
    except MissingColumnsError as exc:
        print(f"input: {exc}", file=sys.stderr)
        return 1
    except (OSError, ValueError) as exc:
        print(f"input: {exc}", file=sys.stderr)
        return 1

    print(result.path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
