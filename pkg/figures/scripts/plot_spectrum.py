#!/usr/bin/env python3
"""Plot the static spectrum fan with optional diving-point lines."""

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from pairfigs import FigureSpec, render


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("scan_csv")
    parser.add_argument("--diving", default=None, help="diving_points.csv for reference lines")
    parser.add_argument("--out", default="spectrum.png")
    args = parser.parse_args()
    render(FigureSpec(kind="spectrum", inputs=(args.scan_csv,), output=args.out,
                      diving_csv=args.diving))
    print(f"wrote {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
