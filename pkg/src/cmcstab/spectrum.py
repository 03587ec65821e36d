"""Jacobi operator spectrum on rotational surfaces by Fourier separation.

Writing u = f(s) e^{i m theta}, the eigenproblem L u + lambda u = 0 with
L = Delta + q becomes the Sturm-Liouville problem

    -(rho f')' / rho + (m^2 / rho^2) f - q f = lambda f

in the rho-weighted L^2 space.  It is discretised by finite volumes: unknowns
live at cell centres s_{j+1/2}, fluxes rho_i (f_j - f_{j-1}) / h at the
interior nodes.  The flux through a pole vanishes because rho = 0 there,
which is the regularity condition for m = 0; for m >= 1 the centrifugal term
m^2/rho^2 forces f to zero at the poles.  The stiffness matrix is symmetric
tridiagonal and the mass matrix diagonal, so the substitution g = sqrt(w) f
yields a symmetric tridiagonal eigenproblem.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import LinAlgError, eigh_tridiagonal

from .core import ProfileCurve, generate_profile, slice_profile
from .errors import CertificationError, InvalidArgumentError, NumericalError

DEFAULT_M_MAX = 8
DEFAULT_K_PER_MODE = 3
DEFAULT_ZERO_TOL = 50.0


@dataclass(frozen=True, eq=False)
class ModeProblem:
    """Discretised Fourier mode ``m`` of the Jacobi operator on a profile."""

    m: int
    nodes: np.ndarray
    centers: np.ndarray
    rho: np.ndarray  # at cell centres
    rho_log_derivative: np.ndarray  # rho'/rho at cell centres
    centrifugal: np.ndarray  # m^2 / rho^2 at cell centres
    q: np.ndarray  # at cell centres
    weight: np.ndarray  # integral of rho over each cell
    flux: np.ndarray  # rho_i / h at interior nodes
    profile: ProfileCurve = field(repr=False)

    @property
    def size(self) -> int:
        return len(self.centers)

    def stiffness(self) -> tuple[np.ndarray, np.ndarray]:
        """Diagonal and off-diagonal of the symmetric stiffness matrix K.

        K f = W (-L_m f) with W = diag(weight).
        """
        d = (self.centrifugal - self.q) * self.weight
        d[:-1] += self.flux
        d[1:] += self.flux
        return d, -self.flux.copy()

    def apply(self, f) -> np.ndarray:
        """The discrete operator -L_m applied to cell values ``f``."""
        f = np.asarray(f, dtype=float)
        d, e = self.stiffness()
        Kf = d * f
        Kf[:-1] += e * f[1:]
        Kf[1:] += e * f[:-1]
        return Kf / self.weight

    def symmetric_tridiagonal(self) -> tuple[np.ndarray, np.ndarray]:
        d, e = self.stiffness()
        iw = 1.0 / np.sqrt(self.weight)
        return d * iw * iw, e * iw[:-1] * iw[1:]

    def roundoff_floor(self) -> float:
        d, e = self.symmetric_tridiagonal()
        scale = np.max(np.abs(d)) + 2.0 * np.max(np.abs(e))
        return 64.0 * np.finfo(float).eps * scale

    def cell_average(self, nodal) -> np.ndarray:
        nodal = np.asarray(nodal, dtype=float)
        return 0.5 * (nodal[1:] + nodal[:-1])

    def inner(self, f, g) -> float:
        """rho-weighted L^2 product along the profile (no 2 pi factor)."""
        return float(np.sum(self.weight * np.asarray(f) * np.asarray(g)))


def build_mode_problem(profile: ProfileCurve, m: int) -> ModeProblem:
    if m < 0 or int(m) != m:
        raise InvalidArgumentError(f"Fourier mode must be a nonnegative integer, got {m!r}")
    m = int(m)
    s = profile.s
    h = np.diff(s)
    rho_n = profile.rho
    rho_c = 0.5 * (rho_n[1:] + rho_n[:-1])
    if np.any(rho_c <= 0):
        raise InvalidArgumentError("profile has a vanishing parallel radius away from the poles")
    weight = h * rho_c
    flux = rho_n[1:-1] / (0.5 * (h[1:] + h[:-1]))
    return ModeProblem(
        m=m,
        nodes=s,
        centers=0.5 * (s[1:] + s[:-1]),
        rho=rho_c,
        rho_log_derivative=np.diff(rho_n) / (h * rho_c),
        centrifugal=m * m / rho_c ** 2,
        q=0.5 * (profile.q[1:] + profile.q[:-1]),
        weight=weight,
        flux=flux,
        profile=profile,
    )


@dataclass(frozen=True, eq=False)
class ModeSpectrum:
    """Lowest eigenpairs of one Fourier mode.

    ``eigenvectors[:, i]`` holds cell values of f normalised so that the
    rho-weighted norm is one.  ``errors`` are Richardson estimates from a grid
    with twice the spacing; ``extrapolated`` the corresponding corrected values.
    """

    m: int
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    errors: np.ndarray
    extrapolated: np.ndarray
    roundoff: float


def _lowest(problem: ModeProblem, k: int):
    d, e = problem.symmetric_tridiagonal()
    try:
        vals, vecs = eigh_tridiagonal(d, e, select="i", select_range=(0, k - 1))
    except (LinAlgError, ValueError) as exc:
        raise NumericalError(
            f"tridiagonal eigensolver failed for mode m={problem.m}",
            m=problem.m, size=problem.size, cause=str(exc),
        ) from exc
    if not np.all(np.isfinite(vals)):
        raise NumericalError("non-finite eigenvalues", m=problem.m, values=vals.tolist())
    vecs = vecs / np.sqrt(problem.weight)[:, None]
    return vals, vecs


def coarse_profile(profile: ProfileCurve) -> ProfileCurve:
    """The same surface on a grid with (about) twice the spacing."""
    if (profile.n_samples - 1) % 2 == 0:
        return profile.subsample(2)
    n = (profile.n_samples - 1) // 2 + 1
    if profile.is_slice:
        return slice_profile(n)
    return generate_profile(profile.space, profile.H, n)


def eigensolve(problem: ModeProblem, k: int, coarse: ModeProblem | None = None) -> ModeSpectrum:
    """The ``k`` smallest eigenvalues of a mode problem, ascending.

    If ``coarse`` is not given it is built from the profile with doubled
    spacing; Richardson's rule for a second-order scheme gives the error
    estimate |lambda_h - lambda_2h| / 3.
    """
    if k < 1 or k >= problem.size:
        raise InvalidArgumentError(f"k must satisfy 1 <= k < {problem.size}, got {k}")
    vals, vecs = _lowest(problem, k)
    if coarse is None:
        coarse = build_mode_problem(coarse_profile(problem.profile), problem.m)
    cvals, _ = _lowest(coarse, min(k, coarse.size - 1))
    if len(cvals) < k:
        cvals = np.concatenate([cvals, np.full(k - len(cvals), np.nan)])
    diff = (vals - cvals) / 3.0
    return ModeSpectrum(
        m=problem.m,
        eigenvalues=vals,
        eigenvectors=vecs,
        errors=np.abs(diff),
        extrapolated=vals + diff,
        roundoff=problem.roundoff_floor(),
    )


@dataclass(frozen=True, eq=False)
class SpectrumResult:
    """Assembled low spectrum of L (convention L g + lambda g = 0).

    Modes m >= 1 contribute each eigenvalue twice (cos and sin).
    """

    H: float
    kappa: int
    per_mode: dict
    error_estimates: dict
    tolerances: dict
    lambda1: float
    lambda2: float
    lambda2_error: float
    lambda1_tolerance: float
    lambda2_tolerance: float
    kernel_dim: int
    negative_count: int
    modes: dict = field(repr=False)
    certification: dict = field(default_factory=dict)
    flags: list = field(default_factory=list)

    def kernel_vectors(self, m: int = 0) -> list[np.ndarray]:
        """Cell values of the mode-``m`` eigenfunctions counted as kernel."""
        mode = self.modes[m]
        tol = self.tolerances[m]
        return [mode.eigenvectors[:, i] for i, lam in enumerate(mode.eigenvalues)
                if abs(lam) <= tol[i]]

    def to_dict(self) -> dict:
        return {
            "H": self.H,
            "kappa": self.kappa,
            "lambda1": self.lambda1,
            "lambda2": self.lambda2,
            "kernel_dim": self.kernel_dim,
            "negative_count": self.negative_count,
            "per_mode": {str(m): [float(v) for v in vals] for m, vals in self.per_mode.items()},
            "error_estimates": {
                str(m): [float(v) for v in errs] for m, errs in self.error_estimates.items()
            },
            "lambda2_error": self.lambda2_error,
            "certification": self.certification,
            "flags": list(self.flags),
            "convention": "L g + lambda g = 0",
        }


def _tolerance(mode: ModeSpectrum, zero_tol: float) -> np.ndarray:
    err = np.nan_to_num(mode.errors, nan=np.inf)
    return np.maximum(zero_tol * err, mode.roundoff)


def assemble_spectrum(
    profile: ProfileCurve,
    m_max: int = DEFAULT_M_MAX,
    k_per_mode: int = DEFAULT_K_PER_MODE,
    zero_tol: float = DEFAULT_ZERO_TOL,
) -> SpectrumResult:
    """Merge the mode spectra for m = 0..m_max into the global low spectrum.

    ``zero_tol`` multiplies each eigenvalue's Richardson error estimate to give
    its zero band (never below the roundoff floor of the mode matrix).  Mode
    m_max + 1 is solved as well and must be clearly positive, otherwise the
    omitted modes could hide eigenvalues at or below zero.
    """
    if m_max < 2:
        raise InvalidArgumentError(f"m_max must be >= 2, got {m_max}")
    if not zero_tol > 0:
        raise InvalidArgumentError(f"zero_tol must be positive, got {zero_tol}")
    coarse = coarse_profile(profile)

    modes = {}
    tolerances = {}
    for m in range(m_max + 2):
        k = k_per_mode if m <= m_max else 1
        fine_p = build_mode_problem(profile, m)
        modes[m] = eigensolve(fine_p, k, build_mode_problem(coarse, m))
        tolerances[m] = _tolerance(modes[m], zero_tol)

    guard = modes.pop(m_max + 1)
    guard_tol = tolerances.pop(m_max + 1)
    guard_val = float(guard.eigenvalues[0])
    if not guard_val > guard_tol[0]:
        raise CertificationError(
            f"lowest eigenvalue of omitted mode m={m_max + 1} is {guard_val:.3e}, not clearly "
            f"positive; increase m_max",
            m=m_max + 1, value=guard_val, tolerance=float(guard_tol[0]),
        )
    for m, mode in modes.items():
        top = float(mode.eigenvalues[-1])
        if not top > tolerances[m][-1]:
            raise CertificationError(
                f"all {k_per_mode} computed eigenvalues of mode m={m} are <= 0; "
                f"increase k_per_mode",
                m=m, top=top,
            )

    entries = []
    for m, mode in modes.items():
        mult = 1 if m == 0 else 2
        for lam, tol, err in zip(mode.eigenvalues, tolerances[m], mode.errors):
            entries.extend([(float(lam), float(tol), float(err), m)] * mult)
    entries.sort(key=lambda e: e[0])

    kernel_dim = sum(1 for lam, tol, _, _ in entries if abs(lam) <= tol)
    negative_count = sum(1 for lam, tol, _, _ in entries if lam < -tol)
    flags = []
    if not profile.is_slice and kernel_dim != 3:
        flags.append(f"kernel_dim={kernel_dim} differs from the Killing-field count 3")

    return SpectrumResult(
        H=profile.H,
        kappa=profile.space.kappa,
        per_mode={m: mode.eigenvalues.copy() for m, mode in modes.items()},
        error_estimates={m: mode.errors.copy() for m, mode in modes.items()},
        tolerances=tolerances,
        lambda1=entries[0][0],
        lambda2=entries[1][0],
        lambda2_error=entries[1][2],
        lambda1_tolerance=entries[0][1],
        lambda2_tolerance=entries[1][1],
        kernel_dim=kernel_dim,
        negative_count=negative_count,
        modes=modes,
        certification={"guard_mode": m_max + 1, "guard_lambda": guard_val,
                       "guard_tolerance": float(guard_tol[0])},
        flags=flags,
    )


def killing_vertical(problem: ModeProblem) -> np.ndarray:
    """<d/dt, N> = cos(sigma) sampled at the cell centres (up to sign)."""
    return problem.cell_average(np.cos(problem.profile.sigma))


def weighted_distance(problem: ModeProblem, f, g) -> float:
    """rho-weighted L^2 distance between f and g after normalising both and
    aligning signs."""
    f = np.asarray(f, dtype=float)
    g = np.asarray(g, dtype=float)
    f = f / math.sqrt(problem.inner(f, f))
    g = g / math.sqrt(problem.inner(g, g))
    if problem.inner(f, g) < 0:
        g = -g
    d = f - g
    return math.sqrt(problem.inner(d, d))


__all__ = [
    "ModeProblem",
    "ModeSpectrum",
    "SpectrumResult",
    "build_mode_problem",
    "eigensolve",
    "assemble_spectrum",
    "coarse_profile",
    "killing_vertical",
    "weighted_distance",
]
