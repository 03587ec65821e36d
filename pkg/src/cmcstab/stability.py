"""Volume-constrained stability of rotational CMC spheres (Koiso's criterion).

When lambda_1 < 0, lambda_2 = 0 and every kernel function has zero mean,
there is a unique u orthogonal to ker L with L u = 1, and the sphere is stable
iff the integral of u is >= 0.  Along the family of spheres this integral
equals -A'(H) / (4H), which gives an independent check against the
closed-form area.
"""
from __future__ import annotations

import enum
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import partial

import numpy as np
import scipy.sparse as sps
from scipy.sparse.linalg import spsolve

from . import closedform
from .core import SpaceForm, _as_space, area_quadrature, check_existence, generate_profile, slice_profile
from .errors import HypothesisViolationError, InvalidArgumentError, NumericalError
from .spectrum import (
    DEFAULT_K_PER_MODE,
    DEFAULT_M_MAX,
    DEFAULT_ZERO_TOL,
    ModeProblem,
    SpectrumResult,
    _lowest,
    assemble_spectrum,
    build_mode_problem,
    coarse_profile,
)

DEFAULT_N_SAMPLES = 2001
DEFAULT_VERDICT_FACTOR = 100.0
DEFAULT_KERNEL_MEAN_TOL = 1e-6


class Verdict(str, enum.Enum):
    STABLE = "Stable"
    UNSTABLE = "Unstable"
    MARGINAL = "Marginal"


@dataclass(frozen=True, eq=False)
class AxisymmetricSolution:
    """Cell values of u solving L u = 1 in the m = 0 sector, u orthogonal to ker L.

    The saddle-point system enforces the orthogonality with Lagrange
    multipliers, so the discrete equation is L u = 1 + Z mu with Z the kernel
    basis; mu is at the level of the discretisation error of the kernel.
    """

    problem: ModeProblem
    u: np.ndarray
    multipliers: np.ndarray
    kernel_term: np.ndarray
    integral: float

    def residual(self) -> float:
        """max |L u - 1 - Z mu|, i.e. the accuracy of the linear solve."""
        Lu = -self.problem.apply(self.u)
        return float(np.max(np.abs(Lu - 1.0 - self.kernel_term)))


def _solve_constrained(problem: ModeProblem, kernel: list[np.ndarray]) -> AxisymmetricSolution:
    d, e = problem.stiffness()
    K = sps.diags([e, d, e], [-1, 0, 1], format="csc")
    C = np.column_stack([problem.weight * z for z in kernel])
    M = sps.bmat([[K, sps.csc_matrix(C)], [sps.csc_matrix(C.T), None]], format="csc")
    rhs = np.concatenate([-problem.weight, np.zeros(C.shape[1])])
    sol = spsolve(M, rhs)
    if not np.all(np.isfinite(sol)):
        raise NumericalError("saddle-point solve for L u = 1 failed", size=problem.size)
    u = sol[: problem.size]
    mu = np.atleast_1d(sol[problem.size:])
    # K u + W Z mu = -W 1, i.e. L u = 1 + Z mu
    return AxisymmetricSolution(
        problem=problem,
        u=u,
        multipliers=mu,
        kernel_term=np.column_stack(kernel) @ mu,
        integral=2.0 * math.pi * float(np.sum(problem.weight * u)),
    )


def _nearest_zero_vector(problem: ModeProblem) -> np.ndarray:
    vals, vecs = _lowest(problem, min(3, problem.size - 1))
    return vecs[:, int(np.argmin(np.abs(vals)))]


def solve_lu_equals_one(profile, spectrum: SpectrumResult) -> AxisymmetricSolution:
    """The m = 0 solution of L u = 1 orthogonal to the m = 0 kernel.

    The source is axisymmetric and L preserves Fourier modes, so the m = 1
    kernel pair is orthogonal to u automatically.
    """
    kernel = spectrum.kernel_vectors(0)
    if not kernel:
        raise NumericalError(
            "spectrum has no m=0 kernel function; cannot project L u = 1",
            lambda2=spectrum.lambda2, kernel_dim=spectrum.kernel_dim,
        )
    problem = build_mode_problem(profile, 0)
    if len(kernel[0]) != problem.size:
        raise NumericalError("kernel basis does not match the profile grid",
                             kernel_size=len(kernel[0]), grid_size=problem.size)
    return _solve_constrained(problem, kernel)


def integral_u_error(profile, fine: AxisymmetricSolution) -> float:
    """Richardson estimate of the discretisation error of the integral of u."""
    coarse = build_mode_problem(coarse_profile(profile), 0)
    cs = _solve_constrained(coarse, [_nearest_zero_vector(coarse)])
    return abs(fine.integral - cs.integral) / 3.0


@dataclass(frozen=True)
class StabilityVerdict:
    space: SpaceForm
    H: float
    verdict: Verdict
    lambda1: float
    lambda2: float
    u_integral: float
    dAdH: float
    consistency_residual: float
    u_integral_error: float = 0.0
    tolerance: float = 0.0
    kernel_dim: int = 0
    negative_count: int = 0
    kernel_means: tuple = ()
    note: str = ""

    @property
    def relative_consistency(self) -> float:
        ref = abs(self.dAdH / (4.0 * self.H)) if self.H > 0 else 0.0
        return self.consistency_residual / ref if ref > 0 else float("nan")

    def to_dict(self) -> dict:
        return {
            "space": self.space.name,
            "kappa": self.space.kappa,
            "H": self.H,
            "verdict": self.verdict.value,
            "lambda1": self.lambda1,
            "lambda2": self.lambda2,
            "u_integral": self.u_integral,
            "u_integral_error": self.u_integral_error,
            "tolerance": self.tolerance,
            "dAdH": self.dAdH,
            "consistency_residual": self.consistency_residual,
            "kernel_dim": self.kernel_dim,
            "negative_count": self.negative_count,
            "kernel_means": list(self.kernel_means),
            "note": self.note,
        }

    def csv_row(self) -> dict:
        return {k: self.to_dict()[k] for k in SWEEP_CSV_FIELDS}


SWEEP_CSV_FIELDS = ("H", "verdict", "lambda1", "lambda2", "u_integral", "dAdH",
                    "consistency_residual")


def classify_horizontal_slice(n_samples: int = DEFAULT_N_SAMPLES, m_max: int = DEFAULT_M_MAX,
                              k_per_mode: int = DEFAULT_K_PER_MODE,
                              zero_tol: float = DEFAULT_ZERO_TOL) -> StabilityVerdict:
    """Horizontal slices: L is the round Laplacian, so Q(u, u) >= 0 for every u.

    Koiso's criterion does not apply (lambda_1 = 0); the verdict rests on
    the spectrum having no negative eigenvalue.
    """
    spec = assemble_spectrum(slice_profile(n_samples), m_max, k_per_mode, zero_tol)
    if spec.negative_count:
        raise HypothesisViolationError("slice spectrum has negative eigenvalues",
                                       lambda1=spec.lambda1)
    return StabilityVerdict(
        space=SpaceForm(1), H=0.0, verdict=Verdict.STABLE, lambda1=spec.lambda1,
        lambda2=spec.lambda2, u_integral=float("nan"), dAdH=float("nan"),
        consistency_residual=float("nan"), kernel_dim=spec.kernel_dim,
        negative_count=0, note="horizontal slice: Jacobi operator is the Laplacian",
    )


def koiso_classify(
    space,
    H: float,
    n_samples: int = DEFAULT_N_SAMPLES,
    m_max: int = DEFAULT_M_MAX,
    k_per_mode: int = DEFAULT_K_PER_MODE,
    zero_tol: float = DEFAULT_ZERO_TOL,
    verdict_factor: float = DEFAULT_VERDICT_FACTOR,
    kernel_mean_tol: float = DEFAULT_KERNEL_MEAN_TOL,
) -> StabilityVerdict:
    """Stable / Unstable / Marginal verdict for the rotational sphere at ``H``.

    H = 0 in S^2 x R is routed to :func:`classify_horizontal_slice`.
    Raises :class:`HypothesisViolationError` if lambda_1 < 0 = lambda_2 or the
    zero-mean property of the kernel fails beyond tolerance.
    """
    space = _as_space(space)
    if space.kappa == 1 and H == 0:
        return classify_horizontal_slice(n_samples, m_max, k_per_mode, zero_tol)
    check_existence(space, H)

    profile = generate_profile(space, H, n_samples)
    spec = assemble_spectrum(profile, m_max, k_per_mode, zero_tol)

    if not (spec.lambda1 < -spec.lambda1_tolerance
            and abs(spec.lambda2) <= spec.lambda2_tolerance
            and spec.negative_count == 1):
        raise HypothesisViolationError(
            "hypothesis (i) lambda1 < 0 = lambda2 fails numerically",
            lambda1=spec.lambda1, lambda2=spec.lambda2, lambda2_error=spec.lambda2_error,
            negative_count=spec.negative_count,
        )

    # hypothesis (ii): zero mean of kernel functions; m >= 1 ones integrate
    # to zero over theta identically
    problem = build_mode_problem(profile, 0)
    area = area_quadrature(profile)
    means = []
    for g in spec.kernel_vectors(0):
        norm = math.sqrt(2.0 * math.pi * problem.inner(g, g))
        mean = 2.0 * math.pi * float(np.sum(problem.weight * g))
        rel = abs(mean) / (norm * math.sqrt(area))
        means.append(rel)
        if rel > kernel_mean_tol:
            raise HypothesisViolationError(
                "hypothesis (ii) fails: a kernel function has nonzero mean",
                relative_mean=rel, tolerance=kernel_mean_tol,
            )
    n_higher = spec.kernel_dim - len(means)
    means.extend([0.0] * max(n_higher, 0))

    sol = solve_lu_equals_one(profile, spec)
    err = integral_u_error(profile, sol)
    tol = verdict_factor * err
    I = sol.integral
    if I >= tol:
        verdict = Verdict.STABLE
    elif I <= -tol:
        verdict = Verdict.UNSTABLE
    else:
        verdict = Verdict.MARGINAL

    dAdH = closedform.dA_dH(space, H)
    return StabilityVerdict(
        space=space, H=float(H), verdict=verdict, lambda1=spec.lambda1, lambda2=spec.lambda2,
        u_integral=I, dAdH=dAdH, consistency_residual=abs(I + dAdH / (4.0 * H)),
        u_integral_error=err, tolerance=tol, kernel_dim=spec.kernel_dim,
        negative_count=spec.negative_count, kernel_means=tuple(means),
    )


def stability_sweep(space, H_grid, workers: int | None = None, **kwargs) -> list[StabilityVerdict]:
    """Classify every H of the grid; results follow grid order.

    With ``workers`` > 1 the points are fanned out over processes; each
    point is a pure function of its inputs so the output is identical to the
    serial run.
    """
    space = _as_space(space)
    grid = [float(H) for H in H_grid]
    if not grid:
        raise InvalidArgumentError("empty H grid")
    func = partial(koiso_classify, space, **kwargs)
    if workers is None or workers <= 1:
        return [func(H) for H in grid]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, grid))


def verdict_transitions(verdicts: list[StabilityVerdict]) -> list[tuple[float, float]]:
    """Grid brackets where the verdict changes between Unstable and Stable.

    Marginal points are skipped over so a Unstable, Marginal, Stable run
    yields a single bracket spanning the marginal point.
    """
    decided = [v for v in verdicts if v.verdict is not Verdict.MARGINAL]
    out = []
    for a, b in zip(decided, decided[1:]):
        if a.verdict is not b.verdict:
            out.append((a.H, b.H))
    return out


__all__ = [
    "Verdict",
    "StabilityVerdict",
    "AxisymmetricSolution",
    "SWEEP_CSV_FIELDS",
    "solve_lu_equals_one",
    "integral_u_error",
    "classify_horizontal_slice",
    "koiso_classify",
    "stability_sweep",
    "verdict_transitions",
]
