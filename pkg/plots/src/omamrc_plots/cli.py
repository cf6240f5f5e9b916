"""Command-line wrapper: plot --input CSV --figure KIND --output PATH."""

from __future__ import annotations

import argparse
import sys

import matplotlib.pyplot as plt

from .render import FIGURE_KINDS, RenderError, render


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="omamrc-plot",
        description="Render simulator sweep CSVs into throughput figures.")
    parser.add_argument("--input", required=True, help="sweep CSV file")
    parser.add_argument("--figure", required=True, choices=FIGURE_KINDS)
    parser.add_argument("--output", required=True, help="image path (png/pdf)")
    args = parser.parse_args(argv)
    try:
        fig = render(args.input, args.figure, args.output)
        plt.close(fig)
    except RenderError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except OSError as err:
        print(f"error: cannot write {args.output}: {err}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
