import math

import numpy as np
import pytest

from cbtkraw import (
    ComplexRootError,
    DegenerateError,
    DomainError,
    ModelParams,
    SingularMatrixError,
    SpectralParamSet,
    check_geometry,
    check_orthogonality_conditions,
    compute_dual_eta,
    compute_eta,
    solve_spectral,
    solve_u_matrix,
)
from cbtkraw.params import compute_delta
from cbtkraw.acceptance import random_model

DEMO = ModelParams(N=6, alpha=(0.3, 0.2), beta=(0.25, 0.35))


def test_n1_closed_forms():
    sp = solve_spectral(ModelParams(N=3, alpha=(0.5,), beta=(0.5,)))
    assert sp.Dn == pytest.approx(1.5, rel=1e-15)
    assert sp.eta[0] == pytest.approx(2 / 3, rel=1e-15)
    assert sp.u[0, 0] == pytest.approx(1.5, rel=1e-15)
    assert sp.eigen_factors[0] == pytest.approx(0.25, rel=1e-14)
    assert sp.eta_bar[0] == pytest.approx(sp.eta[0], rel=1e-14)
    assert compute_delta(sp.u, sp.eta)[0] == pytest.approx(0.5, rel=1e-14)


def test_small_alpha_limit():
    eta, Dn = compute_eta(ModelParams(N=2, alpha=(1e-9,), beta=(0.4,)))
    assert Dn == pytest.approx(1.0, abs=1e-8)
    assert eta[0] == pytest.approx(0.4, rel=1e-8)


def test_eta_against_stationary_mean():
    # the mean of the next state is A x + N beta with A = diag(alpha) - beta alpha^T;
    # at stationarity N eta = A N eta + N beta
    p = DEMO
    a, b = np.array(p.alpha), np.array(p.beta)
    A = np.diag(a) - np.outer(b, a)
    fixed = np.linalg.solve(np.eye(2) - A, b)
    eta, _ = compute_eta(p)
    assert np.allclose(eta, fixed, rtol=1e-14)


def test_printed_quadratic_roots():
    a1, a2 = DEMO.alpha
    b1, b2 = DEMO.beta
    coeffs = [b1 * (a1 - a2), -(1 - a1) * (a1 - a2 + a1 * b1 + a2 * b2), a1 * (1 - a1) ** 2]
    expected = np.sort(np.roots(coeffs).real + a1)
    u, roots = solve_u_matrix(DEMO)
    assert np.allclose(np.sort(u[:, 0]), expected, rtol=1e-12)


@pytest.mark.parametrize("seed", range(10))
@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_eigen_factors_match_regression_matrix(seed, n):
    # independent oracle: 1 - omega are the eigenvalues of diag(alpha) - beta alpha^T
    rng = np.random.default_rng(seed)
    p = random_model(rng, n, 4)
    sp = solve_spectral(p)
    a, b = np.array(p.alpha), np.array(p.beta)
    ev = np.sort(np.linalg.eigvals(np.diag(a) - np.outer(b, a)).real)
    assert np.allclose(np.sort(sp.eigen_factors), ev, rtol=1e-10, atol=1e-13)
    # each row of u follows from its eigenvalue: a (1 - u) = lam (a - u), scaled componentwise
    for i, lam in enumerate(sp.eigen_factors):
        u = sp.u[i]
        assert np.all(np.abs(a * (1 - u) - lam * (a - u)) <= 1e-12 * (a * (1 + np.abs(u)) + a + np.abs(u)))
    assert np.allclose(sp.omega, sp.u @ b, rtol=1e-9)


@pytest.mark.parametrize("seed", range(10))
def test_relations_on_solved_instances(seed):
    rng = np.random.default_rng(seed)
    for n in (2, 3):
        sp = solve_spectral(random_model(rng, n, 4))
        assert np.allclose(sp.u @ sp.eta, 1.0, atol=1e-12)
        assert np.allclose(sp.u.T @ sp.eta_bar, 1.0, atol=1e-12)
        assert math.fsum(sp.eta) == pytest.approx(math.fsum(sp.eta_bar), abs=1e-10)
        assert check_orthogonality_conditions(sp).passed
        assert np.max(check_geometry(sp.u)) < 1e-9


def test_root_permutation_covariance():
    sp = solve_spectral(DEMO)
    perm = [1, 0]
    permuted = SpectralParamSet.from_u(sp.u[perm], sp.eta)
    assert check_orthogonality_conditions(permuted).passed
    assert np.allclose(permuted.eta_bar, sp.eta_bar[perm], rtol=1e-12)


def test_n1_condition_sets_empty():
    sp = solve_spectral(ModelParams(N=3, alpha=(0.4,), beta=(0.3,)))
    rep = check_orthogonality_conditions(sp)
    assert rep.residuals["cross"] == 0.0 and rep.residuals["mixed"] == 0.0 and rep.passed
    assert check_geometry(sp.u).size == 0 or np.max(check_geometry(sp.u)) == 0.0


def test_perturbation_negative_control():
    sp = solve_spectral(DEMO)
    u = sp.u.copy()
    u[0, 1] += 1e-3
    rep = check_orthogonality_conditions(SpectralParamSet.from_u(u, sp.eta))
    assert not rep.passed
    assert 1e-5 < rep.residuals["cross"] < 1e-2


def test_random_u_violates_conditions():
    rng = np.random.default_rng(0)
    sp = SpectralParamSet.from_u(rng.uniform(-2, 2, (2, 2)), [0.3, 0.2])
    assert not check_orthogonality_conditions(sp).passed


def test_roundtrip_dict():
    sp = solve_spectral(DEMO)
    again = SpectralParamSet.from_dict(sp.to_dict())
    assert check_orthogonality_conditions(again).residuals == check_orthogonality_conditions(sp).residuals
    assert ModelParams.from_dict(DEMO.to_dict()) == DEMO


@pytest.mark.parametrize("kwargs", [
    dict(N=2, alpha=(0.3, 0.3), beta=(0.2, 0.2)),
    dict(N=2, alpha=(0.3,), beta=(1.0,)),
    dict(N=2, alpha=(0.0,), beta=(0.5,)),
    dict(N=2, alpha=(0.3, 0.4), beta=(0.6, 0.5)),
    dict(N=-1, alpha=(0.3,), beta=(0.5,)),
    dict(N=2, alpha=(0.3,), beta=(0.5, 0.1)),
])
def test_invalid_models(kwargs):
    with pytest.raises(DomainError):
        ModelParams(**kwargs)


def test_n_mismatch_rejected():
    with pytest.raises(DomainError):
        ModelParams.from_dict({"n": 3, "N": 2, "alpha": [0.1, 0.2], "beta": [0.1, 0.2]})


def test_singular_dual_system():
    with pytest.raises(SingularMatrixError):
        compute_dual_eta(np.ones((2, 2)), [0.3, 0.2])


def test_near_coincident_alphas_still_real():
    # roots interlace the alphas, so they stay real and distinct even when alphas nearly touch
    p = ModelParams(N=2, alpha=(0.4, 0.4 + 1e-4), beta=(0.3, 0.3))
    sp = solve_spectral(p)
    assert check_orthogonality_conditions(sp).passed
    a, b = np.array(p.alpha), np.array(p.beta)
    ev = np.sort(np.linalg.eigvals(np.diag(a) - np.outer(b, a)).real)
    assert np.allclose(np.sort(sp.eigen_factors), ev, rtol=1e-13)


def test_error_hierarchy():
    assert issubclass(ComplexRootError, Exception) and issubclass(DegenerateError, Exception)
