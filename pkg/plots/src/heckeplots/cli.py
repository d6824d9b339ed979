"""Command line entry: hecke-plots CSV_IN OUT_IMAGE [--kind ratio|candidates].

Exit codes mirror the heckesum contract: 0 success, 2 usage/schema
error.
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional

from .frame import SchemaError
from .render import plot_candidates, plot_ratio

EXIT_OK = 0
EXIT_USAGE = 2


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="hecke-plots",
        description="Render a heckesum scan CSV into a figure plus a data sidecar",
    )
    ap.add_argument("csv_in", help="scan CSV produced by 'heckesum scan'")
    ap.add_argument("out_image", help="output image path (.svg or .png)")
    ap.add_argument(
        "--kind", choices=("ratio", "candidates"), default="ratio",
        help="figure type (default ratio)",
    )
    return ap


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        if args.kind == "ratio":
            plot_ratio(args.csv_in, args.out_image)
        else:
            plot_candidates(args.csv_in, args.out_image)
    except (SchemaError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
