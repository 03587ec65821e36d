"""Command-line front end.

Every command writing to ``--out`` also writes ``<out>.manifest.json``
recording the argument vector, parameters, grids, tolerances and package
version; ``cmcstab replay <manifest>`` re-runs it and reproduces the primary
outputs byte for byte.

Exit codes: 0 success, 2 domain or existence error, 3 numerical
certification failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__, closedform, core, spectrum, stability, topology
from .errors import CMCError, InvalidArgumentError, NoSuchSphereError, NumericalError

log = logging.getLogger("cmcstab")

EXIT_OK = 0
EXIT_DOMAIN = 2
EXIT_NUMERICAL = 3


def _dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False, default=_json_default) + "\n"


def _json_default(o):
    if isinstance(o, (np.floating, np.integer)):
        return o.item()
    if isinstance(o, np.ndarray):
        return o.tolist()
    raise TypeError(f"not JSON serialisable: {type(o).__name__}")


def _emit(text: str, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text)


def _series(path: Path, xs, ys, header: str) -> str:
    np.savetxt(path, np.column_stack([xs, ys]), fmt="%.17g", header=header, comments="# ")
    return str(path)


def _plot_path(out: Path, suffix: str) -> Path:
    return out.with_name(f"{out.stem}_{suffix}.dat")


def cmd_profile(args) -> dict:
    profile = core.generate_profile(args.space, args.H, args.samples)
    if args.out is None:
        buf = io.StringIO()
        core.write_profile_csv(profile, buf)
        sys.stdout.write(buf.getvalue())
        return {}
    core.write_profile_csv(profile, args.out)
    outputs = [str(args.out)]
    if args.plot_data:
        outputs.append(_series(_plot_path(args.out, "rt"), profile.r, profile.t, "r t"))
    return {"outputs": outputs, "S_total": profile.S_total, "r_max": profile.r_max,
            "area": core.area_quadrature(profile)}


def _grid(args) -> list[float]:
    if args.steps < 1:
        raise InvalidArgumentError("--steps must be >= 1")
    if args.H_min > args.H_max:
        raise InvalidArgumentError("--H-min must not exceed --H-max")
    if args.H_min == args.H_max or args.steps == 1:
        return [float(args.H_min)]
    return [float(h) for h in np.linspace(args.H_min, args.H_max, args.steps)]


def _csv_text(rows, fields) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    w.writeheader()
    for row in rows:
        w.writerow({k: (repr(v) if isinstance(v, float) else v) for k, v in row.items()})
    return buf.getvalue()


def cmd_sweep(args) -> dict:
    space = core.SpaceForm.from_name(args.space)
    grid = _grid(args)
    for H in grid:
        core.check_existence(space, H)
    verdicts = stability.stability_sweep(
        space, grid, workers=args.workers, n_samples=args.samples, m_max=args.m_max,
        k_per_mode=args.k_per_mode, zero_tol=args.zero_tol, verdict_factor=args.verdict_factor,
    )
    table = _csv_text([v.csv_row() for v in verdicts], stability.SWEEP_CSV_FIELDS)
    area_rows = closedform.sweep_rows(space, grid)
    area_table = _csv_text(area_rows, ("H", "A", "dAdH", "stable_flag"))
    transitions = stability.verdict_transitions(verdicts)
    summary = {
        "space": space.name,
        "grid": grid,
        "verdicts": [v.verdict.value for v in verdicts],
        "transitions": [list(t) for t in transitions],
        "H0": closedform.find_H0() if space.kappa == 1 else None,
        "max_relative_consistency": max(
            (v.relative_consistency for v in verdicts), default=float("nan")),
    }
    if args.out is None:
        sys.stdout.write(table)
        sys.stdout.write(_dump_json(summary))
        return {}
    args.out.write_text(table)
    area_path = args.out.with_name(f"{args.out.stem}_area.csv")
    area_path.write_text(area_table)
    summary_path = args.out.with_name(f"{args.out.stem}_summary.json")
    summary_path.write_text(_dump_json(summary))
    outputs = [str(args.out), str(area_path), str(summary_path)]
    if args.plot_data:
        Hs = [r["H"] for r in area_rows]
        outputs.append(_series(_plot_path(args.out, "area"), Hs, [r["A"] for r in area_rows], "H A"))
        outputs.append(_series(_plot_path(args.out, "u_integral"), Hs,
                               [v.u_integral for v in verdicts], "H u_integral"))
    return {"outputs": outputs, "grid": grid}


def cmd_spectrum(args) -> dict:
    if args.slice:
        profile = core.slice_profile(args.samples)
    else:
        if args.H is None:
            raise InvalidArgumentError("--H is required unless --slice is given")
        profile = core.generate_profile(args.space, args.H, args.samples)
    result = spectrum.assemble_spectrum(profile, args.m_max, args.k_per_mode, args.zero_tol)
    text = _dump_json(result.to_dict())
    _emit(text, args.out)
    if args.out is None:
        return {}
    outputs = [str(args.out)]
    if args.plot_data:
        ms, lams = zip(*[(m, lam) for m, vals in result.per_mode.items() for lam in vals])
        outputs.append(_series(_plot_path(args.out, "modes"), ms, lams, "m lambda"))
    return {"outputs": outputs}


def cmd_classify(args) -> dict:
    verdict = stability.koiso_classify(
        args.space, args.H, n_samples=args.samples, m_max=args.m_max,
        k_per_mode=args.k_per_mode, zero_tol=args.zero_tol, verdict_factor=args.verdict_factor,
    )
    _emit(_dump_json(verdict.to_dict()), args.out)
    return {"outputs": [str(args.out)]} if args.out else {}


def cmd_bounds(args) -> dict:
    if args.h2xr:
        if args.H is None:
            raise InvalidArgumentError("--h2xr requires --H")
        report = topology.genus_bound_h2r(args.H, exact=args.exact).to_dict()
    elif args.conformally_flat:
        if args.ricci_nonneg == args.scalar_nonneg:
            raise InvalidArgumentError(
                "--conformally-flat needs exactly one of --ricci-nonneg / --scalar-nonneg")
        ca = "RicciNonneg" if args.ricci_nonneg else "ScalarNonneg"
        report = topology.genus_bound_conformally_flat(ca, args.embedded).to_dict()
    elif args.s2xr:
        report = topology.classify_s2r_compact_stable()
    else:
        raise InvalidArgumentError("choose one of --h2xr, --conformally-flat, --s2xr")
    _emit(_dump_json(report), args.out)
    return {"outputs": [str(args.out)]} if args.out else {}


def cmd_h0(args) -> dict:
    H0 = closedform.find_H0()
    _emit(_dump_json({"H0": H0, "A(H0)": closedform.area_s2r(H0),
                      "dAdH(H0)": closedform.dA_dH(1, H0),
                      "pedrosa_H1_literature": closedform.PEDROSA_H1}), args.out)
    return {}


def cmd_replay(args) -> dict:
    manifest = json.loads(Path(args.manifest).read_text())
    return {"exit": main(manifest["argv"], write_manifest=False)}


def _add_numeric(p, spectral=True):
    p.add_argument("--samples", type=int, default=stability.DEFAULT_N_SAMPLES,
                   help="profile samples (default %(default)s)")
    if spectral:
        p.add_argument("--m-max", dest="m_max", type=int, default=spectrum.DEFAULT_M_MAX)
        p.add_argument("--k-per-mode", dest="k_per_mode", type=int,
                       default=spectrum.DEFAULT_K_PER_MODE)
        p.add_argument("--zero-tol", dest="zero_tol", type=float,
                       default=spectrum.DEFAULT_ZERO_TOL,
                       help="zero band as a multiple of the Richardson error estimate")


def _add_out(p):
    p.add_argument("--out", type=Path, default=None)
    p.add_argument("--plot-data", dest="plot_data", action="store_true",
                   help="also write x,y series files next to --out")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cmcstab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("profile", help="generating curve of a rotational CMC sphere (CSV)")
    p.add_argument("--space", choices=["s2xr", "h2xr"], required=True)
    p.add_argument("--H", type=float, required=True)
    _add_numeric(p, spectral=False)
    _add_out(p)
    p.set_defaults(func=cmd_profile)

    p = sub.add_parser("sweep", help="stability verdicts over an H grid (CSV + JSON summary)")
    p.add_argument("--space", choices=["s2xr", "h2xr"], required=True)
    p.add_argument("--H-min", dest="H_min", type=float, required=True)
    p.add_argument("--H-max", dest="H_max", type=float, required=True)
    p.add_argument("--steps", type=int, default=40)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--verdict-factor", dest="verdict_factor", type=float,
                   default=stability.DEFAULT_VERDICT_FACTOR)
    _add_numeric(p)
    _add_out(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("spectrum", help="low spectrum of the Jacobi operator (JSON)")
    p.add_argument("--space", choices=["s2xr", "h2xr"], default="s2xr")
    p.add_argument("--H", type=float)
    p.add_argument("--slice", action="store_true", help="horizontal slice of S^2xR")
    _add_numeric(p)
    _add_out(p)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("classify", help="Koiso stability verdict at one H (JSON)")
    p.add_argument("--space", choices=["s2xr", "h2xr"], required=True)
    p.add_argument("--H", type=float, required=True)
    p.add_argument("--verdict-factor", dest="verdict_factor", type=float,
                   default=stability.DEFAULT_VERDICT_FACTOR)
    _add_numeric(p)
    _add_out(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("bounds", help="genus bounds for stable CMC surfaces (JSON)")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--h2xr", action="store_true")
    g.add_argument("--conformally-flat", dest="conformally_flat", action="store_true")
    g.add_argument("--s2xr", action="store_true")
    p.add_argument("--H", type=float)
    p.add_argument("--exact", choices=["inv_sqrt3", "inv_sqrt2"], default=None,
                   help="treat H as exactly 1/sqrt(3) or 1/sqrt(2)")
    p.add_argument("--ricci-nonneg", dest="ricci_nonneg", action="store_true")
    p.add_argument("--scalar-nonneg", dest="scalar_nonneg", action="store_true")
    e = p.add_mutually_exclusive_group()
    e.add_argument("--embedded", dest="embedded", action="store_true", default=None)
    e.add_argument("--not-embedded", dest="embedded", action="store_false")
    p.add_argument("--out", type=Path, default=None)
    p.set_defaults(func=cmd_bounds, plot_data=False)

    p = sub.add_parser("h0", help="critical mean curvature H0 in S^2xR")
    p.add_argument("--out", type=Path, default=None)
    p.set_defaults(func=cmd_h0, plot_data=False)

    p = sub.add_parser("replay", help="re-run the command recorded in a manifest")
    p.add_argument("manifest", type=Path)
    p.set_defaults(func=cmd_replay, out=None)
    return parser


def _manifest(argv, args, info, duration) -> dict:
    params = {k: (str(v) if isinstance(v, Path) else v)
              for k, v in vars(args).items() if k not in ("func",)}
    return {
        "argv": list(argv),
        "command": args.command,
        "parameters": params,
        "grid": info.get("grid"),
        "tolerances": {k: params[k] for k in ("zero_tol", "verdict_factor") if k in params},
        "outputs": info.get("outputs", []),
        "version": __version__,
        "wall_clock_seconds": duration,
    }


def main(argv=None, write_manifest: bool = True) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    start = time.perf_counter()
    try:
        info = args.func(args)
    except (NoSuchSphereError, InvalidArgumentError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except NumericalError as exc:
        print(f"numerical failure: {exc} {getattr(exc, 'diagnostics', {})}", file=sys.stderr)
        return EXIT_NUMERICAL
    except CMCError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    if "exit" in info:
        return info["exit"]
    if write_manifest and getattr(args, "out", None) is not None:
        man = _manifest(argv, args, info, time.perf_counter() - start)
        Path(f"{args.out}.manifest.json").write_text(_dump_json(man))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
