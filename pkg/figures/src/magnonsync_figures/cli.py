"""Command line: render the standard figure set for a finished run.

    render-figures <run-dir> [--out <dir>]

Exit codes: 0 success, 2 bad input (missing run directory, manifest, columns).
"""

import argparse
import sys

from .render import MissingColumn, render_run


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="render-figures",
        description="Render phase portraits, time series, and sweep curves "
                    "from a magnonsync output directory.")
    parser.add_argument("run_dir", help="directory containing manifest.json")
    parser.add_argument("--out", default=None, metavar="DIR",
                        help="image output directory "
                             "(default: <run-dir>/figures)")
    args = parser.parse_args(argv)
    try:
        written = render_run(args.run_dir, out_dir=args.out)
    except (FileNotFoundError, MissingColumn, ValueError) as exc:
        print(f"render-figures: {exc}", file=sys.stderr)
        return 2
    for path in written:
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
