import math

import numpy as np
import pytest

from cmcstab import closedform as cf
from cmcstab import core
from cmcstab.errors import InvalidArgumentError, NoSuchSphereError

from oracles import area_mp, dA_dH_mp

H0_MPMATH = 0.18540875443931600078  # mpmath findroot on mp.diff of the area


def test_area_s2r_examples():
    assert cf.area_s2r(0.5) == pytest.approx(8 * math.pi * (0.5 + 2 ** -1.5 * math.log(1 + 2 ** 0.5)),
                                             rel=1e-15)
    assert cf.area_s2r(1e-9) == pytest.approx(8 * math.pi, rel=1e-12)
    assert cf.area_s2r(10.0) * 100 == pytest.approx(4 * math.pi, rel=0.02)
    with pytest.raises(InvalidArgumentError):
        cf.area_s2r(0.0)


def test_area_h2r_examples():
    assert cf.area_h2r(1 / math.sqrt(2)) == pytest.approx(8 * math.pi * (1 + math.pi / 2), rel=1e-14)
    assert cf.area_h2r(10.0) * 100 == pytest.approx(4 * math.pi, rel=0.02)
    with pytest.raises(NoSuchSphereError):
        cf.area_h2r(0.5)
    assert cf.area_h2r(0.5 + 1e-6) > 1e6


@pytest.mark.parametrize("kappa", [1, -1])
def test_area_against_high_precision(kappa):
    # near H = 1/2 the input itself is ill-conditioned: x = 4H^2 - 1 -> 0
    for H in np.geomspace(0.51 if kappa < 0 else 1e-4, 1e4, 37):
        assert cf.area(kappa, H) == pytest.approx(float(area_mp(kappa, H)), rel=1e-13)


@pytest.mark.parametrize("kappa", [1, -1])
def test_derivative_against_high_precision(kappa):
    for H in np.geomspace(0.52 if kappa < 0 else 1e-3, 1e3, 25):
        assert cf.dA_dH(kappa, H) == pytest.approx(float(dA_dH_mp(kappa, H)), rel=1e-12)


@pytest.mark.parametrize("kappa", [1, -1])
def test_derivative_self_check(kappa):
    for H in np.geomspace(0.55 if kappa < 0 else 0.01, 20, 30):
        if kappa == 1 and abs(H - H0_MPMATH) < 0.02:
            continue
        assert cf.derivative_self_check(kappa, H) < 1e-7


def test_derivative_signs():
    assert cf.dA_dH(1, 0.05) > 0
    assert cf.dA_dH(1, 1.0) < 0
    for H in np.geomspace(0.51, 50, 100):
        assert cf.dA_dH(-1, H) < 0


def test_find_H0():
    H0 = cf.find_H0()
    assert 0.17 <= H0 <= 0.19
    assert H0 == pytest.approx(H0_MPMATH, abs=2e-12)
    assert abs(cf.dA_dH(1, H0)) < 1e-9
    grid = np.linspace(0.01, 2.0, 4001)
    assert cf.area_s2r(H0) >= max(cf.area_s2r(H) for H in grid)


def test_single_sign_change():
    grid = list(np.geomspace(1e-4, 1e3, 2000))
    (bracket,) = cf.sign_changes(core.S2xR, grid)
    assert bracket[0] <= cf.find_H0() <= bracket[1]
    assert cf.sign_changes(core.H2xR, list(np.geomspace(0.5001, 1e3, 2000))) == []


def test_area_function_type():
    A = cf.AreaFunction(core.H2xR)
    assert A.domain_min == 0.5
    assert A(2.0) > 0 and A.derivative(2.0) < 0


def test_sweep_rows():
    rows = cf.sweep_rows(core.S2xR, [0.1, 0.5])
    assert [r["stable_flag"] for r in rows] == [0, 1]
    assert set(rows[0]) == {"H", "A", "dAdH", "stable_flag"}
