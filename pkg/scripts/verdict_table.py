"""Koiso verdicts for rotational CMC spheres, with the int u vs -A'(H)/4H check.

    python3 scripts/verdict_table.py [--samples 2001] [--workers 1]
"""
import argparse

from cmcstab import closedform, stability

GRIDS = {
    "s2xr": [0.05, 0.10, 0.15, closedform.find_H0(), 0.25, 0.50, 1.00],
    "h2xr": [0.55, 0.6, 0.75, 1.0, 2.0, 5.0],
}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--samples", type=int, default=stability.DEFAULT_N_SAMPLES)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()

    header = f"{'space':5} {'H':>9} {'verdict':>9} {'lambda1':>11} {'lambda2':>10} " \
             f"{'int u':>11} {'-dA/dH/4H':>11} {'rel.res':>9}"
    print(header)
    for name, grid in GRIDS.items():
        kappa = 1 if name == "s2xr" else -1
        for v in stability.stability_sweep(kappa, grid, workers=args.workers,
                                           n_samples=args.samples):
            target = -v.dAdH / (4 * v.H)
            print(f"{name:5} {v.H:9.5f} {v.verdict.value:>9} {v.lambda1:11.5f} "
                  f"{v.lambda2:10.2e} {v.u_integral:11.6f} {target:11.6f} "
                  f"{v.relative_consistency:9.1e}")


if __name__ == "__main__":
    main()
