"""Closed-form area of rotational CMC spheres and the critical curvature H0.

With x = 4H^2 + kappa and w = 1/sqrt(x) the area of the sphere of mean
curvature H is

    A(H) = 8 pi [ 1/x + (x - kappa) x^(-3/2) F(w) ],

where F = artanh on S^2 x R and F = arctan on H^2 x R.  Differentiating
(using F'(w) = 1/(1 - kappa w^2) = x/(x - kappa)) gives

    dA/dx = 4 pi [ (3 kappa - x) w F(w) - 3 ] / x^2,   dx/dH = 8H.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import bisect

from .core import SpaceForm, S2xR, H2xR, _as_space, check_existence
from .errors import InvalidArgumentError, NoSuchSphereError, NumericalError

# Pedrosa's isoperimetric threshold in S^2 x R; quoted, not computed here.
PEDROSA_H1 = 0.33

H0_XTOL = 1e-12


def _artanh_w(H: float) -> float:
    """artanh(1/sqrt(4H^2 + 1)) without cancellation in 1 - w for small H."""
    sx = math.sqrt(4.0 * H * H + 1.0)
    # (1 + w) / (1 - w) = (sx + 1) / (sx - 1) and sx - 1 = 4H^2 / (sx + 1)
    return 0.5 * math.log((sx + 1.0) ** 2 / (4.0 * H * H))


def _F(kappa: int, H: float) -> float:
    if kappa == 1:
        return _artanh_w(H)
    return math.atan(1.0 / math.sqrt(4.0 * H * H - 1.0))


def area_s2r(H: float) -> float:
    """Area of the rotational CMC sphere of mean curvature H in S^2 x R."""
    if not H > 0:
        raise InvalidArgumentError(f"area_s2r requires H > 0, got {H}")
    x = 4.0 * H * H + 1.0
    return 8.0 * math.pi * (1.0 / x + 4.0 * H * H / x ** 1.5 * _F(1, H))


def area_h2r(H: float) -> float:
    """Area of the rotational CMC sphere of mean curvature H in H^2 x R."""
    check_existence(H2xR, H)
    x = 4.0 * H * H - 1.0
    return 8.0 * math.pi * (1.0 / x + 4.0 * H * H / x ** 1.5 * _F(-1, H))


def area(space, H: float) -> float:
    space = _as_space(space)
    return area_s2r(H) if space.kappa == 1 else area_h2r(H)


def dA_dH(space, H: float) -> float:
    """Analytic derivative of the closed-form area with respect to H."""
    space = _as_space(space)
    if space.kappa == 1 and not H > 0:
        raise InvalidArgumentError(f"dA_dH on S^2xR requires H > 0, got {H}")
    check_existence(space, H)
    kappa = space.kappa
    x = 4.0 * H * H + kappa
    w = 1.0 / math.sqrt(x)
    bracket = (3.0 * kappa - x) * w * _F(kappa, H) - 3.0
    return 32.0 * math.pi * H * bracket / (x * x)


def dA_dH_fd(space, H: float, rel_step: float = 1e-2, levels: int = 4) -> tuple[float, float]:
    """Central-difference estimate of dA/dH refined by Richardson extrapolation.

    Returns (estimate, error_estimate).  Independent of :func:`dA_dH`; used as
    its self-check.
    """
    space = _as_space(space)
    check_existence(space, H)
    h = rel_step * min(H, H - space.min_H) if space.kappa == -1 else rel_step * H
    # Neville tableau on central differences with steps h, h/2, h/4, ...
    table = []
    for i in range(levels):
        hi = h / 2 ** i
        row = [(area(space, H + hi) - area(space, H - hi)) / (2.0 * hi)]
        for j in range(1, i + 1):
            fac = 4.0 ** j
            row.append(row[j - 1] + (row[j - 1] - table[i - 1][j - 1]) / (fac - 1.0))
        table.append(row)
    best = table[-1][-1]
    err = abs(best - table[-2][-2]) if levels > 1 else float("nan")
    return best, err


def derivative_self_check(space, H: float) -> float:
    """Relative disagreement between analytic and extrapolated derivative."""
    exact = dA_dH(space, H)
    approx, _ = dA_dH_fd(space, H)
    return abs(exact - approx) / abs(exact)


@dataclass(frozen=True)
class AreaFunction:
    """A(H) on its existence domain (domain_min, inf)."""

    space: SpaceForm

    @property
    def domain_min(self) -> float:
        return self.space.min_H

    def __call__(self, H: float) -> float:
        return area(self.space, H)

    def derivative(self, H: float) -> float:
        return dA_dH(self.space, H)


def _s2r_derivative(H):
    return dA_dH(S2xR, H)


def sign_changes(space, grid) -> list[tuple[float, float]]:
    """Brackets [H_i, H_{i+1}] of the grid across which dA/dH changes sign."""
    vals = [dA_dH(space, H) for H in grid]
    out = []
    for (a, fa), (b, fb) in zip(zip(grid, vals), zip(grid[1:], vals[1:])):
        if np.sign(fa) != np.sign(fb):
            out.append((float(a), float(b)))
    return out


def find_H0(lo: float = 1e-3, hi: float = 10.0, check_grid: int = 400) -> float:
    """Unique zero of dA/dH on (0, inf) in S^2 x R, by bisection to 1e-12.

    Uniqueness is checked by sign sampling on a log grid over [lo, hi]
    before bisecting.
    """
    grid = np.geomspace(lo, hi, check_grid)
    brackets = sign_changes(S2xR, list(grid))
    if len(brackets) != 1:
        raise NumericalError(
            "dA/dH on S^2xR does not have exactly one sign change on the sampling grid",
            brackets=brackets,
        )
    a, b = brackets[0]
    if not (_s2r_derivative(a) > 0 > _s2r_derivative(b)):
        raise NumericalError("dA/dH bracket has the wrong sign pattern", bracket=(a, b))
    return float(bisect(_s2r_derivative, a, b, xtol=H0_XTOL, rtol=4 * np.finfo(float).eps,
                        maxiter=200))


def sweep_rows(space, grid) -> list[dict]:
    """Rows ``H, A, dAdH, stable_flag`` where stable_flag = (dA/dH <= 0)."""
    rows = []
    for H in grid:
        d = dA_dH(space, H)
        rows.append({"H": float(H), "A": area(space, H), "dAdH": d, "stable_flag": int(d <= 0)})
    return rows


__all__ = [
    "PEDROSA_H1",
    "AreaFunction",
    "area_s2r",
    "area_h2r",
    "area",
    "dA_dH",
    "dA_dH_fd",
    "derivative_self_check",
    "find_H0",
    "sign_changes",
    "sweep_rows",
    "NoSuchSphereError",
]
