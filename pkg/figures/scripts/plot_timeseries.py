#!/usr/bin/env python3
"""Plot the pair-number time series with field-free markers."""

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from pairfigs import FigureSpec, render


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("timeseries_csv")
    parser.add_argument("--out", default="timeseries.png")
    args = parser.parse_args()
    render(FigureSpec(kind="timeseries", inputs=(args.timeseries_csv,), output=args.out))
    print(f"wrote {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
