"""``figures`` command: render cutpoint panels from a harness output directory."""

from __future__ import annotations

import argparse
import sys

from .render import FigureSpec, render


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="figures",
        description="Render GS histogram + SSS density panels from records.csv.",
    )
    parser.add_argument("--in", dest="input_dir", required=True,
                        help="harness output directory containing records.csv")
    parser.add_argument("--out", dest="output_dir", required=True,
                        help="directory for the rendered images")
    parser.add_argument("--bandwidth", default="auto",
                        help="KDE bandwidth in cutpoint units, or 'auto' (Silverman)")
    parser.add_argument("--panel", dest="panels", type=int, action="append", default=None,
                        help="sample size to include, repeatable (default: all present)")
    parser.add_argument("--basename", default="cutpoints",
                        help="output file stem (default: cutpoints)")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    bandwidth: float | str = args.bandwidth
    if bandwidth != "auto":
        try:
            bandwidth = float(bandwidth)
        except ValueError:
            print(f"figures: bad --bandwidth {args.bandwidth!r}", file=sys.stderr)
            return 1
    spec = FigureSpec(
        input_dir=args.input_dir,
        output_dir=args.output_dir,
        panels=tuple(args.panels) if args.panels else None,
        bandwidth=bandwidth,
        basename=args.basename,
    )
    try:
        written = render(spec)
    except (OSError, ValueError) as exc:
        print(f"figures: {exc}", file=sys.stderr)
        return 1
    for path in written:
        print(path)
    return 0


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
