"""Space-form geometry and rotational CMC sphere profiles.

The ambient space is M(kappa) x R with M(+1) = S^2 and M(-1) = H^2.  A
rotational surface is generated by a curve (r(s), t(s)) in a vertical
geodesic plane, where r is the geodesic distance to the rotation axis and t
the height.  With tangent angle sigma (r' = cos sigma, t' = sin sigma) the
principal curvatures are

    k1 = sigma'                      (along the profile)
    k2 = sin(sigma) * ct_kappa(r)    (along the parallels)

and the CMC condition k1 + k2 = 2H is the ODE integrated below.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy.integrate import simpson

from .errors import InvalidArgumentError, NoSuchSphereError

__all__ = [
    "SpaceForm",
    "S2xR",
    "H2xR",
    "ProfileSample",
    "ProfileCurve",
    "sn_kappa",
    "ct_kappa",
    "disk_area",
    "ricci_normal",
    "sectional_tangent",
    "total_arclength",
    "generate_profile",
    "slice_profile",
    "area_quadrature",
    "volume_quadrature",
    "willmore_integral",
    "gauss_bonnet_integral",
    "identity_residuals",
    "write_profile_csv",
    "read_profile_csv",
]

MIN_SAMPLES = 16
PROFILE_CSV_HEADER = "s,r,t,sigma,k1,k2,rho,q"


@dataclass(frozen=True)
class SpaceForm:
    """Sign of the base curvature: +1 for S^2 x R, -1 for H^2 x R."""

    kappa: int

    def __post_init__(self):
        if self.kappa not in (1, -1):
            raise InvalidArgumentError(f"kappa must be +1 or -1, got {self.kappa!r}")

    @property
    def name(self) -> str:
        return "s2xr" if self.kappa == 1 else "h2xr"

    @property
    def min_H(self) -> float:
        """Infimum of mean curvatures carrying a rotational CMC sphere."""
        return 0.0 if self.kappa == 1 else 0.5

    @property
    def scalar_curvature(self) -> int:
        # normalised so that Ric(N) + K_s = S for any unit normal N
        return self.kappa

    @classmethod
    def from_name(cls, name: str) -> "SpaceForm":
        key = name.strip().lower().replace("_", "")
        if key in ("s2xr", "s2r", "sphere", "+1", "1"):
            return cls(1)
        if key in ("h2xr", "h2r", "hyperbolic", "-1"):
            return cls(-1)
        raise InvalidArgumentError(f"unknown space {name!r}; expected 's2xr' or 'h2xr'")


S2xR = SpaceForm(1)
H2xR = SpaceForm(-1)


def _as_space(space) -> SpaceForm:
    if isinstance(space, SpaceForm):
        return space
    if isinstance(space, str):
        return SpaceForm.from_name(space)
    return SpaceForm(int(space))


def sn_kappa(space, r):
    """sin(r) on S^2, sinh(r) on H^2.  Accepts scalars or arrays."""
    space = _as_space(space)
    arr = np.asarray(r, dtype=float)
    if np.any(arr < 0) or np.any(np.isnan(arr)):
        raise InvalidArgumentError("sn_kappa requires r >= 0")
    if space.kappa == 1:
        if np.any(arr > math.pi):
            raise InvalidArgumentError("sn_kappa on S^2 requires r <= pi")
        out = np.sin(arr)
    else:
        out = np.sinh(arr)
    return float(out) if out.ndim == 0 else out


def ct_kappa(space, r):
    """cos(r)/sin(r) on S^2, cosh(r)/sinh(r) on H^2 (singular at r = 0)."""
    space = _as_space(space)
    arr = np.asarray(r, dtype=float)
    out = 1.0 / np.tan(arr) if space.kappa == 1 else 1.0 / np.tanh(arr)
    return float(out) if out.ndim == 0 else out


def disk_area(space, r):
    """Area of the geodesic disk of radius r in the base surface.

    Written as 4 pi sin^2(r/2) (resp. sinh^2) to avoid cancellation at small r.
    """
    space = _as_space(space)
    arr = np.asarray(r, dtype=float)
    half = np.sin(arr / 2) if space.kappa == 1 else np.sinh(arr / 2)
    out = 4.0 * math.pi * half * half
    return float(out) if out.ndim == 0 else out


def ricci_normal(space, sigma):
    """Ambient Ricci curvature on the unit normal of a rotational profile.

    The normal's horizontal component has length |sin sigma|, so
    Ric(N) = kappa * sin^2(sigma).
    """
    space = _as_space(space)
    s = np.sin(np.asarray(sigma, dtype=float))
    out = space.kappa * s * s
    return float(out) if out.ndim == 0 else out


def sectional_tangent(space, sigma):
    """Ambient sectional curvature of the tangent plane, kappa * cos^2(sigma)."""
    space = _as_space(space)
    c = np.cos(np.asarray(sigma, dtype=float))
    out = space.kappa * c * c
    return float(out) if out.ndim == 0 else out


def check_existence(space, H: float) -> None:
    """Raise :class:`NoSuchSphereError` unless a rotational sphere exists at H."""
    space = _as_space(space)
    if not math.isfinite(H):
        raise InvalidArgumentError(f"H must be finite, got {H!r}")
    if space.kappa == 1 and H <= 0:
        raise NoSuchSphereError(
            f"rotational CMC spheres in S^2xR require H > 0 (got H={H})", threshold=0.0
        )
    if space.kappa == -1 and H <= 0.5:
        raise NoSuchSphereError(
            f"rotational CMC spheres in H^2xR exist only for H > 1/2 (got H={H})",
            threshold=0.5,
        )


def total_arclength(space, H: float) -> float:
    """Length of the generating curve, pole to pole: 2 pi / sqrt(4H^2 + kappa).

    Along the curve sin(sigma) = 2H tn_kappa(r/2), hence k1 = H(1 + kappa tn^2)
    = (4H^2 + kappa sin^2 sigma) / (4H); integrating ds = d(sigma)/k1 over
    [0, pi] gives the closed form.
    """
    space = _as_space(space)
    check_existence(space, H)
    return 2.0 * math.pi / math.sqrt(4.0 * H * H + space.kappa)


class ProfileSample(NamedTuple):
    s: float
    r: float
    t: float
    sigma: float
    k1: float
    k2: float
    rho: float
    q: float


@dataclass(frozen=True, eq=False)
class ProfileCurve:
    """Arclength-sampled generating curve of a rotational surface.

    Arrays run from the bottom pole (s = 0) to the top pole (s = S_total).
    """

    space: SpaceForm
    H: float
    s: np.ndarray
    r: np.ndarray
    t: np.ndarray
    sigma: np.ndarray
    k1: np.ndarray
    k2: np.ndarray
    rho: np.ndarray
    q: np.ndarray
    S_total: float
    r_max: float
    first_integral_drift: float = 0.0
    is_slice: bool = False
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        for name in ("s", "r", "t", "sigma", "k1", "k2", "rho", "q"):
            arr = np.array(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @classmethod
    def from_arrays(cls, space, H, s, r, t, sigma, **kwargs) -> "ProfileCurve":
        """Fill curvatures and potential from the raw (s, r, t, sigma) samples."""
        space = _as_space(space)
        s, r, t, sigma = (np.asarray(a, dtype=float) for a in (s, r, t, sigma))
        k2 = _parallel_curvature(space, H, r, sigma)
        k1 = 2.0 * H - k2
        rho = np.sin(r) if space.kappa == 1 else np.sinh(r)
        q = k1 * k1 + k2 * k2 + ricci_normal(space, sigma)
        kwargs.setdefault("S_total", float(s[-1] - s[0]) if len(s) else 0.0)
        kwargs.setdefault("r_max", float(np.max(r)) if len(r) else 0.0)
        return cls(space=space, H=float(H), s=s, r=r, t=t, sigma=sigma,
                   k1=k1, k2=k2, rho=rho, q=q, **kwargs)

    @property
    def n_samples(self) -> int:
        return len(self.s)

    def __len__(self):
        return len(self.s)

    @property
    def step(self) -> float:
        return float(self.s[1] - self.s[0])

    @property
    def samples(self) -> list[ProfileSample]:
        cols = zip(self.s, self.r, self.t, self.sigma, self.k1, self.k2, self.rho, self.q)
        return [ProfileSample(*map(float, row)) for row in cols]

    def subsample(self, stride: int = 2) -> "ProfileCurve":
        """Every ``stride``-th sample; requires (n - 1) divisible by ``stride``."""
        if (self.n_samples - 1) % stride:
            raise InvalidArgumentError(
                f"cannot subsample {self.n_samples} samples with stride {stride}"
            )
        sl = slice(None, None, stride)
        return ProfileCurve(
            space=self.space, H=self.H, s=self.s[sl], r=self.r[sl], t=self.t[sl],
            sigma=self.sigma[sl], k1=self.k1[sl], k2=self.k2[sl], rho=self.rho[sl],
            q=self.q[sl], S_total=self.S_total, r_max=self.r_max,
            first_integral_drift=self.first_integral_drift, is_slice=self.is_slice,
            meta=dict(self.meta),
        )


def _parallel_curvature(space: SpaceForm, H: float, r, sigma):
    # sin(sigma) ct(r) -> H at a regular pole
    r = np.asarray(r, dtype=float)
    sigma = np.asarray(sigma, dtype=float)
    out = np.full(r.shape, float(H))
    pos = r > 0
    if space.kappa == 1:
        out[pos] = np.sin(sigma[pos]) / np.tan(r[pos])
    else:
        out[pos] = np.sin(sigma[pos]) / np.tanh(r[pos])
    return out


def _first_integral(kappa: int, H: float, r: float, sigma: float) -> float:
    # sin(sigma) sn(r) - 2H * int_0^r sn; vanishes along the sphere
    if kappa == 1:
        return math.sin(sigma) * math.sin(r) - 4.0 * H * math.sin(r / 2) ** 2
    return math.sin(sigma) * math.sinh(r) - 4.0 * H * math.sinh(r / 2) ** 2


def _rk4_step(kappa, H, r, t, sg, h):
    ct = (lambda x: math.cos(x) / math.sin(x)) if kappa == 1 else (lambda x: 1.0 / math.tanh(x))

    def f(r, sg):
        return math.cos(sg), math.sin(sg), 2.0 * H - math.sin(sg) * ct(r)

    a0, a1, a2 = f(r, sg)
    b0, b1, b2 = f(r + 0.5 * h * a0, sg + 0.5 * h * a2)
    c0, c1, c2 = f(r + 0.5 * h * b0, sg + 0.5 * h * b2)
    d0, d1, d2 = f(r + h * c0, sg + h * c2)
    return (
        r + h / 6.0 * (a0 + 2 * b0 + 2 * c0 + d0),
        t + h / 6.0 * (a1 + 2 * b1 + 2 * c1 + d1),
        sg + h / 6.0 * (a2 + 2 * b2 + 2 * c2 + d2),
    )


def generate_profile(space, H: float, n_samples: int = 2001) -> ProfileCurve:
    """Generating curve of the rotational CMC sphere of mean curvature ``H``.

    Integrates r' = cos sigma, t' = sin sigma, sigma' = 2H - sin(sigma) ct(r)
    with classical RK4 on a uniform arclength grid of ``n_samples`` points.
    The pole is started from the regular expansion r ~ s, sigma ~ H s at
    s0 = 1e-6 * S_total.  Only the lower half is integrated; the upper half
    follows from the reflection t -> -t, which keeps the grid symmetric and
    avoids evaluating ct(r) near the top pole.  The sphere is centred so that
    the equator sits at t = 0.
    """
    space = _as_space(space)
    check_existence(space, H)
    n = int(n_samples)
    if n < MIN_SAMPLES:
        raise InvalidArgumentError(f"n_samples must be >= {MIN_SAMPLES}, got {n_samples}")

    kappa = space.kappa
    S = total_arclength(space, H)
    h = S / (n - 1)
    half = (n - 1) // 2

    r = np.zeros(n)
    t = np.zeros(n)
    sg = np.zeros(n)

    s0 = 1e-6 * S
    state = (s0, 0.5 * H * s0 * s0, H * s0)
    state = _rk4_step(kappa, H, *state, h - s0)
    r[1], t[1], sg[1] = state
    drift = abs(_first_integral(kappa, H, state[0], state[2]))
    for i in range(2, half + 1):
        state = _rk4_step(kappa, H, *state, h)
        r[i], t[i], sg[i] = state
        drift = max(drift, abs(_first_integral(kappa, H, state[0], state[2])))

    mid = _rk4_step(kappa, H, *state, 0.5 * S - half * h) if 0.5 * S > half * h else state
    drift = max(drift, abs(_first_integral(kappa, H, mid[0], mid[2])))
    r_max, t_mid = mid[0], mid[1]

    for j in range(half + 1, n):
        i = n - 1 - j
        r[j] = r[i]
        t[j] = 2.0 * t_mid - t[i]
        sg[j] = math.pi - sg[i]
    t -= t_mid

    s = np.arange(n) * h
    s[-1] = S
    return ProfileCurve.from_arrays(
        space, H, s, r, t, sg, S_total=S, r_max=r_max, first_integral_drift=drift
    )


def slice_profile(n_samples: int = 2001) -> ProfileCurve:
    """Meridian of a horizontal slice S^2 x {0}: totally geodesic, H = 0.

    rho = sin s on [0, pi] and q = 0, so the Jacobi operator is the round
    Laplacian.
    """
    n = int(n_samples)
    if n < MIN_SAMPLES:
        raise InvalidArgumentError(f"n_samples must be >= {MIN_SAMPLES}, got {n_samples}")
    s = np.linspace(0.0, math.pi, n)
    zeros = np.zeros(n)
    return ProfileCurve(
        space=S2xR, H=0.0, s=s, r=s.copy(), t=zeros, sigma=zeros, k1=zeros, k2=zeros,
        rho=np.sin(s), q=zeros, S_total=math.pi, r_max=math.pi / 2, is_slice=True,
    )


def _integrate(profile: ProfileCurve, density) -> float:
    if profile.n_samples < 2:
        return 0.0
    return float(simpson(density, x=profile.s))


def area_quadrature(profile: ProfileCurve) -> float:
    """Surface area, the integral of 2 pi rho ds (composite Simpson)."""
    return _integrate(profile, 2.0 * math.pi * profile.rho)


def volume_quadrature(profile: ProfileCurve) -> float:
    """Enclosed volume by horizontal disk slicing: integral of D(r) dt."""
    density = disk_area(profile.space, profile.r) * np.sin(profile.sigma)
    return _integrate(profile, density)


def willmore_integral(profile: ProfileCurve) -> float:
    """Integral of H^2 + K_s over the surface; at least 4 pi for closed surfaces."""
    K_s = sectional_tangent(profile.space, profile.sigma)
    return _integrate(profile, (profile.H ** 2 + K_s) * 2.0 * math.pi * profile.rho)


def gauss_bonnet_integral(profile: ProfileCurve) -> float:
    """Total intrinsic curvature; 4 pi for a topological sphere."""
    K_sigma = profile.k1 * profile.k2 + sectional_tangent(profile.space, profile.sigma)
    return _integrate(profile, K_sigma * 2.0 * math.pi * profile.rho)


def identity_residuals(profile: ProfileCurve) -> dict:
    """Maximum pointwise residuals of the geometric identities on a profile."""
    space = profile.space
    H = profile.H
    ric = ricci_normal(space, profile.sigma)
    K_s = sectional_tangent(space, profile.sigma)
    K_sigma = profile.k1 * profile.k2 + K_s
    sff2 = profile.k1 ** 2 + profile.k2 ** 2
    chord = np.hypot(np.diff(profile.r), np.diff(profile.t)) / np.diff(profile.s)
    return {
        "cmc": float(np.max(np.abs(0.5 * (profile.k1 + profile.k2) - H))),
        "ricci_plus_sectional": float(np.max(np.abs(ric + K_s - space.kappa))),
        "gauss": float(np.max(np.abs(sff2 - (4 * H * H + 2 * K_s - 2 * K_sigma)))),
        "potential": float(np.max(np.abs(profile.q - (sff2 + ric)))),
        "arclength": float(np.max(np.abs(chord - 1.0))),
        "first_integral": profile.first_integral_drift,
    }


def write_profile_csv(profile: ProfileCurve, path) -> None:
    """One row per sample, 17 significant digits, header ``s,r,t,sigma,k1,k2,rho,q``."""
    table = np.column_stack(
        [profile.s, profile.r, profile.t, profile.sigma,
         profile.k1, profile.k2, profile.rho, profile.q]
    )
    np.savetxt(path, table, fmt="%.17g", delimiter=",", header=PROFILE_CSV_HEADER, comments="")


def read_profile_csv(path, space, H: float) -> ProfileCurve:
    with open(path) as fh:
        header = fh.readline().strip()
    if header != PROFILE_CSV_HEADER:
        raise InvalidArgumentError(f"unexpected profile CSV header {header!r}")
    cols = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2).T
    s, r, t, sigma, k1, k2, rho, q = cols
    return ProfileCurve(
        space=_as_space(space), H=float(H), s=s, r=r, t=t, sigma=sigma, k1=k1, k2=k2,
        rho=rho, q=q, S_total=float(s[-1]), r_max=float(r.max()),
    )
