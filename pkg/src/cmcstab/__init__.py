"""Stability of rotational constant mean curvature spheres in S^2 x R and H^2 x R."""

__version__ = "0.1.0"

from .core import (  # noqa: E402
    H2xR,
    ProfileCurve,
    S2xR,
    SpaceForm,
    area_quadrature,
    generate_profile,
    slice_profile,
    volume_quadrature,
    willmore_integral,
)
from .closedform import area_h2r, area_s2r, dA_dH, find_H0  # noqa: E402
from .spectrum import assemble_spectrum  # noqa: E402
from .stability import Verdict, koiso_classify, stability_sweep  # noqa: E402
from .topology import genus_bound_conformally_flat, genus_bound_h2r  # noqa: E402

__all__ = [
    "SpaceForm",
    "S2xR",
    "H2xR",
    "ProfileCurve",
    "generate_profile",
    "slice_profile",
    "area_quadrature",
    "volume_quadrature",
    "willmore_integral",
    "area_s2r",
    "area_h2r",
    "dA_dH",
    "find_H0",
    "assemble_spectrum",
    "Verdict",
    "koiso_classify",
    "stability_sweep",
    "genus_bound_h2r",
    "genus_bound_conformally_flat",
]
