"""Locate the critical mean curvature H0 in S^2 x R and tabulate A(H) around it.

    python3 scripts/reproduce_h0.py [--out h0.json]
"""
import argparse
import json

import numpy as np

from cmcstab import closedform


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default=None)
    args = ap.parse_args()

    H0 = closedform.find_H0()
    grid = np.geomspace(1e-3, 1e2, 2000)
    changes = closedform.sign_changes(1, list(grid))
    A0 = closedform.area_s2r(H0)
    report = {
        "H0": H0,
        "A(H0)": A0,
        "dAdH(H0)": closedform.dA_dH(1, H0),
        "sign_changes_on_grid": [list(c) for c in changes],
        "area_is_max_on_grid": bool(A0 >= max(closedform.area_s2r(H) for H in grid)),
    }
    print(f"H0 = {H0:.12f}   A(H0) = {A0:.12f}   sign changes: {len(changes)}")
    for H in (0.05, 0.1, H0, 0.25, 0.5, 1.0):
        print(f"  H = {H:8.5f}  A = {closedform.area_s2r(H):12.8f}  "
              f"dA/dH = {closedform.dA_dH(1, H):+.6e}")
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(report, fh, indent=2)


if __name__ == "__main__":
    main()
