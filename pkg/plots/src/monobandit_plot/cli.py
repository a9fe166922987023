"""monobandit-plot: render figures from sweep summaries and trace CSVs."""

from __future__ import annotations

import argparse
import sys

from monobandit_plot.figures import KINDS, FigureSpec, SchemaError, render


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="monobandit-plot",
        description="Offline figures from monobandit outputs (sidecar JSON per figure)",
    )
    parser.add_argument("--kind", required=True, choices=KINDS)
    parser.add_argument(
        "--in", dest="inputs", action="append", required=True, metavar="PATH",
        help="input file; repeat for multiple series (summary JSON or trace CSV)",
    )
    parser.add_argument("--out", required=True, help="output image path (e.g. fig.png)")
    args = parser.parse_args(argv)

    try:
        sidecar = render(FigureSpec(kind=args.kind, inputs=args.inputs, out_path=args.out))
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {args.out} and {sidecar}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
