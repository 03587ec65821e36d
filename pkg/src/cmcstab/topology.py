"""Genus bounds for closed stable CMC surfaces.

Testing stability against the coordinates of a balanced holomorphic map
phi : Sigma -> S^2 of degree <= 1 + [(g+1)/2] gives, after Gauss-Bonnet and
the Gauss equation, integral inequalities whose right-hand sides are integer
multiples of pi.  The left-hand sides are integrals of quantities of known
sign, so each inequality excludes the genera whose right-hand side has the
wrong sign.  All right-hand sides are exact integers here.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, asdict

from .errors import InvalidArgumentError

INV_SQRT2 = 1.0 / math.sqrt(2.0)
INV_SQRT3 = 1.0 / math.sqrt(3.0)
EXACT_ATOL = 1e-12
SPHERE_ONLY = "sphere-only"
NONEXISTENT = "nonexistence"
# genera replayed in every trace; the RHS coefficients are nonincreasing past 3
TRACE_GENERA = range(0, 6)


class Scenario(str, enum.Enum):
    CONFORMALLY_FLAT_RICCI_NONNEG = "ConformallyFlatRicciNonneg"
    CONFORMALLY_FLAT_SCALAR_NONNEG = "ConformallyFlatScalarNonneg"
    H2XR = "H2xR"
    S2XR = "S2xR"


class CurvatureAssumption(str, enum.Enum):
    RICCI_NONNEG = "RicciNonneg"
    SCALAR_NONNEG = "ScalarNonneg"


def _check_genus(g: int) -> int:
    if int(g) != g or g < 0:
        raise InvalidArgumentError(f"genus must be a nonnegative integer, got {g!r}")
    return int(g)


def degree_bound(g: int) -> int:
    """Brill-Noether bound on the degree of a holomorphic map to S^2."""
    g = _check_genus(g)
    return 1 + (g + 1) // 2


@dataclass(frozen=True)
class RHSValues:
    """Right-hand sides as integer coefficients of pi."""

    rhs_holo1: int  # 8(2 - g + [(g+1)/2])
    rhs_g23: int  # 8(1 - g + [(g+1)/2])
    rhs_neg: int  # 8(-g + [(g+1)/2])
    rhs_scalar: int  # 4(3 - 2g + 2[(g+1)/2])

    def as_floats(self) -> dict:
        return {k: v * math.pi for k, v in asdict(self).items()}


def rhs_values(g: int) -> RHSValues:
    g = _check_genus(g)
    b = (g + 1) // 2
    return RHSValues(
        rhs_holo1=8 * (2 - g + b),
        rhs_g23=8 * (1 - g + b),
        rhs_neg=8 * (-g + b),
        rhs_scalar=4 * (3 - 2 * g + 2 * b),
    )


@dataclass(frozen=True)
class TraceEntry:
    """One replayable step: ``lhs`` has sign ``lhs_sign`` ('+', '0', '-' or
    'nonneg') and is bounded above by ``rhs_pi`` * pi.
    ``excluded`` marks a genus ruled out by a theorem clause rather than
    arithmetic; ``reason`` says which."""

    inequality: str
    genus: int
    lhs: str
    lhs_sign: str
    rhs_pi: int
    excluded: bool = False
    reason: str = ""

    @property
    def admissible(self) -> bool:
        if self.excluded:
            return False
        if self.lhs_sign == "+":
            return self.rhs_pi > 0
        if self.lhs_sign in ("0", "nonneg"):
            return self.rhs_pi >= 0
        return True


@dataclass(frozen=True)
class GenusBoundReport:
    scenario: Scenario
    embedded: bool | None
    max_genus: object  # int, SPHERE_ONLY or NONEXISTENT
    theorem_case: str
    inequality_trace: list = field(default_factory=list)
    H: float | None = None
    qualifiers: list = field(default_factory=list)
    extension: bool = False

    def to_dict(self) -> dict:
        return {
            "scenario": self.scenario.value,
            "embedded": self.embedded,
            "H": self.H,
            "max_genus": self.max_genus,
            "theorem_case": self.theorem_case,
            "qualifiers": list(self.qualifiers),
            "extension": self.extension,
            "inequality_trace": [
                {**asdict(e), "rhs": e.rhs_pi * math.pi, "admissible": e.admissible}
                for e in self.inequality_trace
            ],
        }


def replay_trace(trace: list[TraceEntry]):
    """Recompute the genus bound from a trace: the largest genus admissible in
    every inequality recorded for it, ``SPHERE_ONLY`` if only g = 0 survives."""
    by_genus: dict[int, bool] = {}
    for e in trace:
        by_genus[e.genus] = by_genus.get(e.genus, True) and e.admissible
    ok = sorted(g for g, a in by_genus.items() if a)
    if not ok:
        return NONEXISTENT
    if ok == [0]:
        return SPHERE_ONLY
    return ok[-1]


def _chain(inequality, lhs, sign, coeff, exclusions=None):
    exclusions = exclusions or {}
    out = []
    for g in TRACE_GENERA:
        reason = exclusions.get(g, "")
        out.append(TraceEntry(inequality, g, lhs, sign, coeff(g), bool(reason), reason))
    return out


def genus_bound_conformally_flat(curvature_assumption, embedded: bool | None = None) -> GenusBoundReport:
    """Genus bound in a simply connected conformally flat 3-manifold.

    RicciNonneg: sphere or embedded torus.  ScalarNonneg: genus <= 3, and a
    genus-3 surface is embedded.
    """
    ca = CurvatureAssumption(curvature_assumption)
    if ca is CurvatureAssumption.RICCI_NONNEG:
        excl = {g: "equality forces a totally umbilic sphere" for g in (2, 3)}
        trace = _chain("willmore+holo", "int(2H^2 + Ric N) dA", "nonneg",
                       lambda g: rhs_values(g).rhs_g23, excl)
        if embedded is False:
            trace += [TraceEntry("li-yau+holo", 1, "int(2H^2 + Ric N) dA", "nonneg",
                                 rhs_values(1).rhs_neg, True,
                                 "equality gives an index-one holomorphic map on a torus")]
        max_g = replay_trace(trace)
        return GenusBoundReport(
            scenario=Scenario.CONFORMALLY_FLAT_RICCI_NONNEG, embedded=embedded,
            max_genus=0 if max_g == SPHERE_ONLY else max_g,
            theorem_case="Ricci >= 0: either a sphere or an embedded torus",
            inequality_trace=trace,
            qualifiers=["a torus must be embedded",
                        "disconnected: finite union of totally geodesic surfaces with Ric(N)=0"],
        )

    excl = {}
    if embedded is False:
        excl[3] = "non-embedded genus 3 needs an index-one map of degree 3; impossible"
    trace = _chain("willmore+holo-scalar", "int(3H^2 + S) dA", "nonneg",
                   lambda g: rhs_values(g).rhs_scalar, excl)
    max_g = replay_trace(trace)
    qualifiers = ["if g = 3 then the surface is embedded",
                  "if g = 2 and not embedded then it is minimal and S vanishes on it"]
    return GenusBoundReport(
        scenario=Scenario.CONFORMALLY_FLAT_SCALAR_NONNEG, embedded=embedded,
        max_genus=0 if max_g == SPHERE_ONLY else max_g,
        theorem_case="scalar >= 0: connected stable surfaces have genus <= 3",
        inequality_trace=trace, qualifiers=qualifiers,
    )


def _sign(x: float) -> str:
    return "+" if x > 0 else ("0" if x == 0 else "-")


def genus_bound_h2r(H: float, exact: str | None = None) -> GenusBoundReport:
    """Genus bound for a closed stable CMC surface in H^2 x R.

    Floating-point H can never equal 1/sqrt(3) or 1/sqrt(2) exactly, so pass
    ``exact='inv_sqrt3'`` (or ``'inv_sqrt2'``) to request the equality case;
    values within 1e-12 of those constants are treated the same way.
    """
    if not H > 0:
        raise InvalidArgumentError(f"H must be positive, got {H}")
    if exact not in (None, "inv_sqrt3", "inv_sqrt2"):
        raise InvalidArgumentError(f"unknown exact flag {exact!r}")
    at3 = exact == "inv_sqrt3" or abs(H - INV_SQRT3) <= EXACT_ATOL
    at2 = exact == "inv_sqrt2" or abs(H - INV_SQRT2) <= EXACT_ATOL
    if at3:
        H = INV_SQRT3
    elif at2:
        H = INV_SQRT2

    if H <= 0.5:
        return GenusBoundReport(
            scenario=Scenario.H2XR, embedded=None, max_genus=NONEXISTENT, H=H,
            theorem_case="no compact CMC surface in H^2xR has H <= 1/2",
        )

    if at2 or H > INV_SQRT2:
        # int(2H^2 - 1) <= int(2H^2 + Ric N) <= 8 pi (-g + [(g+1)/2]) for g >= 1
        sign = "0" if at2 else "+"
        excl = {}
        if at2:
            excl[1] = "equality forces Ric(N) = -1, i.e. a horizontal normal everywhere"
        trace = [e for e in _chain("ricci-chain", "int(2H^2 - 1) dA", sign,
                                   lambda g: rhs_values(g).rhs_neg, excl) if e.genus >= 1]
        trace.insert(0, TraceEntry("genus-zero", 0, "rotational sphere", "nonneg", 0))
        case = ("H >= 1/sqrt(2): rotational sphere"
                + (" (equality case via horizontality, not arithmetic)" if at2 else ""))
        return GenusBoundReport(scenario=Scenario.H2XR, embedded=None, max_genus=SPHERE_ONLY,
                                H=H, theorem_case=case, inequality_trace=trace)

    lhs_sign = "0" if at3 else _sign(3 * H * H - 1)
    excl = {}
    if at3:
        excl[3] = "equality gives an index-one map of degree 3 on genus 3; impossible"
    elif lhs_sign == "-":
        # the left side is negative so the chain is silent; cap where the
        # right side stops being positive
        excl = {g: "extension cap, not a theorem clause" for g in TRACE_GENERA if g > 3}
    trace = _chain("li-yau-3h2", "int(3H^2 - 1) dA", lhs_sign,
                   lambda g: rhs_values(g).rhs_g23, excl)
    if at3:
        case = "H = 1/sqrt(3): genus <= 2"
    elif lhs_sign == "+":
        case = "1/sqrt(3) < H < 1/sqrt(2): genus <= 1"
    else:
        return GenusBoundReport(
            scenario=Scenario.H2XR, embedded=None, max_genus=replay_trace(trace), H=H,
            theorem_case="1/2 < H < 1/sqrt(3): g <= 3 is an extension, not a theorem clause",
            inequality_trace=trace, extension=True,
            qualifiers=["int(3H^2 - 1) dA < 0, so the inequality chain does not by itself "
                        "exclude any genus; the cap at 3 is adopted, not proved"],
        )
    return GenusBoundReport(scenario=Scenario.H2XR, embedded=None,
                            max_genus=replay_trace(trace), H=H, theorem_case=case,
                            inequality_trace=trace)


def classify_s2r_compact_stable(H0: float | None = None) -> dict:
    """Compact stable CMC surfaces in S^2 x R."""
    if H0 is None:
        from .closedform import find_H0

        H0 = find_H0()
    return {
        "scenario": Scenario.S2XR.value,
        "alternatives": [
            "finite union of horizontal slices",
            f"rotational sphere with H >= H0 = {H0:.12f}",
        ],
        "H0": H0,
        "forbidden_band": [0.0, H0],
        "corollary": f"no compact stable CMC surface in S^2xR has 0 < H < {H0:.12f}",
    }


__all__ = [
    "Scenario",
    "CurvatureAssumption",
    "RHSValues",
    "TraceEntry",
    "GenusBoundReport",
    "SPHERE_ONLY",
    "NONEXISTENT",
    "degree_bound",
    "rhs_values",
    "replay_trace",
    "genus_bound_conformally_flat",
    "genus_bound_h2r",
    "classify_s2r_compact_stable",
]
