#!/usr/bin/env python3
"""Plot electron/positron density maps from snapshot CSVs."""

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from pairfigs import FigureSpec, render


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("density_csvs", nargs="+")
    parser.add_argument("--out", default="density.png")
    parser.add_argument("--waterfall", action="store_true",
                        help="add a stacked-snapshot panel (offset lines)")
    args = parser.parse_args()
    style = "waterfall" if args.waterfall else "surface"
    render(FigureSpec(kind="density", inputs=tuple(args.density_csvs), output=args.out, style=style))
    print(f"wrote {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
