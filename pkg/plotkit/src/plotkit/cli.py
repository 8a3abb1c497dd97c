"""Command line: plotkit <figure-id> --in <scan.csv|json> --out <image>."""

from __future__ import annotations

import argparse
import sys

from .render import FIGURE_IDS, FigureJob, render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plotkit",
        description="render modwave scan files into publication-style figures")
    parser.add_argument("figure_id", choices=FIGURE_IDS,
                        help="figure layout; 'auto' picks from the file shape")
    parser.add_argument("--in", dest="input_path", required=True,
                        help="scan CSV or JSON produced by the modwave CLI")
    parser.add_argument("--out", dest="output_path", required=True,
                        help="output image path (png, pdf, svg, ...)")
    parser.add_argument("--cmap", default="inferno", help="matplotlib colormap")
    parser.add_argument("--no-overlays", action="store_true",
                        help="suppress guide-line overlays")
    parser.add_argument("--linear", action="store_true",
                        help="force a linear color scale")
    parser.add_argument("--dpi", type=int, default=150)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    job = FigureJob(figure_id=args.figure_id, input_path=args.input_path,
                    output_path=args.output_path, colormap=args.cmap,
                    show_overlays=not args.no_overlays,
                    log_scale=False if args.linear else None, dpi=args.dpi)
    out = render(job)
    print(f"wrote {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
