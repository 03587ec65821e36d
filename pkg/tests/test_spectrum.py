import math

import numpy as np
import pytest

from cmcstab import core, spectrum as sp
from cmcstab.errors import CertificationError, InvalidArgumentError

from conftest import profile, spec
from oracles import sphere_laplacian_spectrum


def test_mode_problem_shapes():
    p = profile(1, 0.5)
    prob = sp.build_mode_problem(p, 2)
    n = p.n_samples - 1
    for arr in (prob.rho, prob.rho_log_derivative, prob.centrifugal, prob.q, prob.weight):
        assert arr.shape == (n,)
    assert prob.flux.shape == (n - 1,)
    with pytest.raises(InvalidArgumentError):
        sp.build_mode_problem(p, -1)


def test_operator_symmetric_in_weighted_product():
    prob = sp.build_mode_problem(profile(-1, 0.8), 1)
    rng = np.random.default_rng(0)
    f, g = rng.standard_normal((2, prob.size))
    assert prob.inner(prob.apply(f), g) == pytest.approx(prob.inner(f, prob.apply(g)), rel=1e-10)


def test_constant_function_gives_minus_q():
    for kappa, H in [(1, 0.3), (-1, 1.2)]:
        prob = sp.build_mode_problem(profile(kappa, H), 0)
        out = prob.apply(np.ones(prob.size))
        np.testing.assert_allclose(out, -prob.q, rtol=1e-9, atol=1e-9)


def test_slice_reduces_to_laplacian():
    prob = sp.build_mode_problem(core.slice_profile(401), 0)
    assert np.all(prob.q == 0)
    np.testing.assert_allclose(prob.rho, np.sin(prob.centers), rtol=1e-4)


@pytest.mark.parametrize("kappa,H", [(1, 0.5), (1, 0.12), (-1, 0.7), (-1, 2.0)])
def test_vertical_killing_field_is_jacobi(kappa, H):
    errs = []
    for n in (1001, 2001):
        prob = sp.build_mode_problem(profile(kappa, H, n), 0)
        z = sp.killing_vertical(prob)
        r = prob.apply(z)
        errs.append(math.sqrt(prob.inner(r, r) / prob.inner(z, z)))
    assert errs[1] < 1e-2
    assert errs[0] / errs[1] > 3.0  # vanishes at second order


@pytest.mark.parametrize("m", [0, 1, 2, 3])
def test_slice_eigenvalues(m):
    prob = sp.build_mode_problem(core.slice_profile(2001), m)
    res = sp.eigensolve(prob, 4 - m)
    exact = sphere_laplacian_spectrum(m, 4 - m)
    for lam, ex in zip(res.eigenvalues, exact):
        if ex == 0:
            assert abs(lam) < 1e-8
        else:
            assert lam == pytest.approx(ex, rel=1e-3)
    nonzero = np.array(exact) > 0
    assert np.all(res.errors[nonzero] > 0)


def test_eigenvectors_normalised():
    prob = sp.build_mode_problem(profile(1, 0.5), 0)
    res = sp.eigensolve(prob, 3)
    for i in range(3):
        v = res.eigenvectors[:, i]
        assert prob.inner(v, v) == pytest.approx(1.0, rel=1e-10)
    assert prob.inner(res.eigenvectors[:, 0], res.eigenvectors[:, 1]) == pytest.approx(0, abs=1e-10)
    with pytest.raises(InvalidArgumentError):
        sp.eigensolve(prob, 0)


def test_rotational_killing_fields_in_mode_one():
    prob = sp.build_mode_problem(profile(1, 0.5), 1)
    res = sp.eigensolve(prob, 1)
    assert abs(res.eigenvalues[0]) < 50 * res.errors[0]


def test_kernel_matches_vertical_killing_field():
    prob = sp.build_mode_problem(profile(1, 0.5), 0)
    (g,) = spec(1, 0.5).kernel_vectors(0)
    assert sp.weighted_distance(prob, g, sp.killing_vertical(prob)) < 1e-4


@pytest.mark.parametrize("kappa,H", [(1, 0.5), (-1, 1.0), (1, 0.1), (-1, 0.55)])
def test_assembled_structure(kappa, H):
    s = spec(kappa, H)
    assert s.lambda1 < 0 and s.lambda1 <= s.lambda2
    assert abs(s.lambda2) < 50 * s.lambda2_error
    assert s.kernel_dim == 3 and s.negative_count == 1
    assert not s.flags


def test_modes_increase_with_m():
    s = spec(-1, 1.0)
    for i in range(3):
        vals = [s.per_mode[m][i] for m in range(4)]
        assert all(a < b for a, b in zip(vals, vals[1:]))


def test_slice_spectrum():
    s = sp.assemble_spectrum(core.slice_profile(2001))
    assert abs(s.lambda1) <= s.lambda1_tolerance
    assert s.negative_count == 0 and s.kernel_dim == 1
    assert s.lambda2 == pytest.approx(2.0, rel=1e-3)


def test_certification_failure():
    with pytest.raises(CertificationError):
        sp.assemble_spectrum(profile(1, 0.5), m_max=8, zero_tol=1e9)
    with pytest.raises(InvalidArgumentError):
        sp.assemble_spectrum(profile(1, 0.5), m_max=1)


def test_eigenvalue_convergence_order():
    p = core.generate_profile(-1, 0.9, 4001)
    vals = [sp._lowest(sp.build_mode_problem(p.subsample(k), 0), 1)[0][0] for k in (4, 2, 1)]
    ratio = (vals[0] - vals[1]) / (vals[1] - vals[2])
    assert ratio == pytest.approx(4.0, rel=0.05)


def test_json_schema():
    d = spec(1, 0.5).to_dict()
    for key in ("H", "kappa", "lambda1", "lambda2", "kernel_dim", "negative_count", "per_mode",
                "error_estimates"):
        assert key in d
    assert set(d["per_mode"]) == {str(m) for m in range(9)}
