"""Scan remote wage and start-time spacing for the commuting-cost paradox; write CSV and an ASCII map."""
import argparse
import csv
from pathlib import Path

import numpy as np

from corridor_equilibrium.instances import worked_example_config
from corridor_equilibrium.scenarios import paradox_scan


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--theta", nargs=3, type=float, default=[20, 39.5, 40], metavar=("LO", "HI", "N"))
    ap.add_argument("--spacing", nargs=3, type=float, default=[1, 30, 30], metavar=("LO", "HI", "N"))
    ap.add_argument("--mode", choices=["merged_formula", "exact"], default="merged_formula")
    ap.add_argument("--out", default="out/paradox_scan_grid.csv")
    args = ap.parse_args()
    thetas = np.linspace(args.theta[0], args.theta[1], int(args.theta[2]))
    spacings = np.linspace(args.spacing[0], args.spacing[1], int(args.spacing[2]))
    pts = paradox_scan(worked_example_config(), thetas, spacings, args.mode)

    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    with open(out, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["theta_remote", "spacing", "paradox", "delta_tc", "error"])
        for p in pts:
            w.writerow([f"{p.theta_remote:.9g}", f"{p.spacing:.9g}", p.paradox,
                        "" if p.delta_tc is None else f"{p.delta_tc:.9g}", p.error or ""])

    # rows: remote wage (top = highest), columns: spacing; P paradox, . none, x error
    grid = np.array([{True: "P", False: "."}.get(p.paradox, "x") for p in pts]).reshape(len(thetas), len(spacings))
    print(f"spacing {spacings[0]:g} .. {spacings[-1]:g} ->")
    for t, row in zip(thetas[::-1], grid[::-1]):
        print(f"{t:7.2f} {''.join(row)}")
    flagged = sum(p.paradox is True for p in pts)
    print(f"{flagged}/{len(pts)} points flagged; wrote {out}")


if __name__ == "__main__":
    main()
