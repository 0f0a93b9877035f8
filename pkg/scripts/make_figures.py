"""Write the three figure CSVs into a directory and print their key features."""
import argparse
from pathlib import Path

import numpy as np

from bandcorr import figures


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("outdir", nargs="?", default="figures")
    ap.add_argument("--precision", default="auto", choices=("auto", "double", "extended"))
    args = ap.parse_args()
    out = Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)
    for fig in (1, 2, 3):
        path = out / f"figure{fig}.csv"
        with open(path, "w", newline="") as fh:
            figures.write_figure_csv(fh, fig, args.precision)
        rows = figures.figure_rows(fig, args.precision)
        col = np.array([np.nan if r[1] is None else r[1] for r in rows])
        b = np.array([r[0] for r in rows])
        i = int(np.nanargmax(col))
        print(f"{path}: {len(rows)} rows, max {col[i]:.6g} at b={b[i]:.4g}, last value {col[-1]:.6g}")


if __name__ == "__main__":
    main()
