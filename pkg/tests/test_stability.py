import dataclasses

import numpy as np
import pytest

from cmcstab import closedform, core, stability as st
from cmcstab.errors import HypothesisViolationError, InvalidArgumentError, NoSuchSphereError
from cmcstab.stability import Verdict

from conftest import profile, spec


@pytest.mark.parametrize("kappa,H,expected", [
    (1, 0.5, Verdict.STABLE),
    (1, 0.1, Verdict.UNSTABLE),
    (-1, 0.75, Verdict.STABLE),
])
def test_classify_examples(kappa, H, expected):
    v = st.koiso_classify(kappa, H)
    assert v.verdict is expected
    assert v.lambda1 < 0
    assert v.kernel_dim == 3 and v.negative_count == 1
    assert v.relative_consistency < 1e-3


def test_u_integral_signs():
    assert st.solve_lu_equals_one(profile(1, 0.1), spec(1, 0.1)).integral < 0
    assert st.solve_lu_equals_one(profile(-1, 1.0), spec(-1, 1.0)).integral > 0


def test_H0_is_marginal():
    H0 = closedform.find_H0()
    v = st.koiso_classify(1, H0)
    assert v.verdict is Verdict.MARGINAL
    assert abs(v.u_integral) <= v.tolerance


def test_lu_residual_and_orthogonality():
    p, s = profile(1, 0.5), spec(1, 0.5)
    sol = st.solve_lu_equals_one(p, s)
    # pointwise residual; the tiny pole-cell weights amplify roundoff
    assert sol.residual() < 1e-6
    (g,) = s.kernel_vectors(0)
    assert abs(sol.problem.inner(sol.u, g)) < 1e-10 * np.sqrt(sol.problem.inner(sol.u, sol.u))
    # the multiplier only absorbs the discretisation error of the kernel
    assert np.max(np.abs(sol.kernel_term)) < 1e-3


@pytest.mark.parametrize("kappa,H", [(1, 0.3), (1, 1.0), (-1, 0.6), (-1, 2.0)])
def test_consistency_with_area_derivative(kappa, H):
    v = st.koiso_classify(kappa, H)
    assert v.relative_consistency < 1e-4


def test_kernel_functions_have_zero_mean():
    v = st.koiso_classify(1, 0.25)
    assert len(v.kernel_means) == 3
    assert max(v.kernel_means) < 1e-6


def test_verdict_stable_under_refinement():
    for kappa, H in [(1, 0.12), (1, 0.3), (-1, 0.8)]:
        a = st.koiso_classify(kappa, H, n_samples=1001)
        b = st.koiso_classify(kappa, H, n_samples=2001)
        assert a.verdict is b.verdict


def test_hypothesis_violation_is_raised(monkeypatch):
    real = spec(1, 0.5)
    fake = dataclasses.replace(real, lambda2=1.0, kernel_dim=2)
    monkeypatch.setattr(st, "assemble_spectrum", lambda *a, **k: fake)
    with pytest.raises(HypothesisViolationError) as info:
        st.koiso_classify(1, 0.5)
    assert info.value.diagnostics["lambda2"] == 1.0


def test_kernel_mean_tolerance_is_enforced():
    with pytest.raises(HypothesisViolationError):
        st.koiso_classify(1, 0.5, kernel_mean_tol=0.0)


def test_domain_errors():
    with pytest.raises(NoSuchSphereError):
        st.koiso_classify(-1, 0.4)
    with pytest.raises(InvalidArgumentError):
        st.stability_sweep(1, [])


def test_horizontal_slice():
    v = st.koiso_classify(1, 0.0)
    assert v.verdict is Verdict.STABLE
    assert v.negative_count == 0 and v.kernel_dim == 1


def test_sweep_transition_contains_H0():
    grid = np.linspace(0.05, 1.0, 12)
    verdicts = st.stability_sweep(1, grid, n_samples=1001)
    (bracket,) = st.verdict_transitions(verdicts)
    assert bracket[0] < closedform.find_H0() < bracket[1]


def test_sweep_above_threshold_all_stable():
    verdicts = st.stability_sweep(1, [0.2, 0.4, 0.8], n_samples=1001)
    assert {v.verdict for v in verdicts} == {Verdict.STABLE}
    verdicts = st.stability_sweep(-1, [0.6, 1.5, 5.0], n_samples=1001)
    assert {v.verdict for v in verdicts} == {Verdict.STABLE}


def test_parallel_sweep_is_bitwise_deterministic():
    grid = [0.1, 0.3, 0.7]
    serial = st.stability_sweep(1, grid, n_samples=801)
    parallel = st.stability_sweep(1, grid, workers=2, n_samples=801)
    assert [v.to_dict() for v in serial] == [v.to_dict() for v in parallel]


def test_csv_row_fields():
    row = st.koiso_classify(-1, 1.0, n_samples=801).csv_row()
    assert tuple(row) == st.SWEEP_CSV_FIELDS
    assert row["verdict"] == "Stable"
