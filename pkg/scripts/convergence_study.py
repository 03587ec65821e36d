"""Grid-halving study: area quadrature and lowest eigenvalues vs n_samples.

    python3 scripts/convergence_study.py --space s2xr --H 0.5
"""
import argparse

from cmcstab import closedform, core, spectrum


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--space", choices=["s2xr", "h2xr"], default="s2xr")
    ap.add_argument("--H", type=float, default=0.5)
    ap.add_argument("--levels", type=int, default=5)
    args = ap.parse_args()

    space = core.SpaceForm.from_name(args.space)
    exact = closedform.area(space, args.H)
    prev = None
    print(f"{'n':>6} {'area err':>11} {'ratio':>6} {'lambda1':>16} {'lambda(m=1)':>14}")
    for k in range(args.levels):
        n = 125 * 2 ** k + 1
        p = core.generate_profile(space, args.H, n)
        err = abs(core.area_quadrature(p) - exact)
        lam0 = spectrum._lowest(spectrum.build_mode_problem(p, 0), 1)[0][0]
        lam1 = spectrum._lowest(spectrum.build_mode_problem(p, 1), 1)[0][0]
        ratio = f"{prev / err:6.2f}" if prev else " " * 6
        print(f"{n:6d} {err:11.3e} {ratio} {lam0:16.10f} {lam1:14.3e}")
        prev = err


if __name__ == "__main__":
    main()
