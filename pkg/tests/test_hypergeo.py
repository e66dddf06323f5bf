import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cbtkraw import (
    DomainError,
    QuadratureError,
    check_euler_transform,
    check_pfaff_transform,
    enumerate_simplex,
    eval_2f1_terminating,
    eval_f1n,
    eval_f1n_quadrature,
    f1n_series,
)
from oracles import hyp2f1_exact, krawtchouk_exact, poch

rationals = st.fractions(min_value=-2, max_value=2, max_denominator=7)


def test_zero_degree_is_one():
    u = np.array([[0.3, -1.2], [2.0, 0.7]])
    for x in enumerate_simplex(2, 4):
        assert eval_f1n((0, 0), x, 4, u) == 1.0


def test_zero_matrix_is_one():
    assert eval_f1n((2, 1), (1, 3), 5, np.zeros((2, 2))) == 1.0


def test_one_variable_example():
    assert eval_f1n((1,), (1,), 2, [[1.5]]) == pytest.approx(0.25, rel=1e-15)
    assert eval_2f1_terminating(1, -1, -2, 1.5) == pytest.approx(0.25, rel=1e-15)
    assert eval_2f1_terminating(0, 0.3, 1.7, 9.0) == 1.0


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 4), st.data())
def test_n2_matches_exact_brute_force(N, data):
    m = data.draw(st.tuples(st.integers(0, N), st.integers(0, N)).filter(lambda t: sum(t) <= N))
    x = data.draw(st.tuples(st.integers(0, N), st.integers(0, N)).filter(lambda t: sum(t) <= N))
    u = [[data.draw(rationals) for _ in range(2)] for _ in range(2)]
    exact = krawtchouk_exact(m, x, N, u)
    got = eval_f1n(m, x, N, [[float(v) for v in row] for row in u])
    assert got == pytest.approx(float(exact), rel=1e-12, abs=1e-12)


def test_n3_matches_exact_brute_force():
    u = [[Fraction(1, 2), Fraction(-3, 4), Fraction(5, 3)],
         [Fraction(2), Fraction(1, 5), Fraction(-1)],
         [Fraction(-2, 3), Fraction(3, 2), Fraction(1, 7)]]
    uf = [[float(v) for v in row] for row in u]
    for m, x in [((1, 0, 1), (0, 1, 1)), ((1, 1, 0), (1, 0, 1)), ((0, 2, 0), (1, 1, 0))]:
        assert eval_f1n(m, x, 3, uf) == pytest.approx(float(krawtchouk_exact(m, x, 3, u)), rel=1e-12)


@pytest.mark.parametrize("N", range(0, 6))
def test_duality_exhaustive_n2(N):
    u = np.array([[0.7, -1.3], [2.2, 0.4]])
    enum = enumerate_simplex(2, N)
    for m in enum:
        for x in enum:
            a, b = eval_f1n(m, x, N, u), eval_f1n(x, m, N, u.T)
            assert a == pytest.approx(b, rel=1e-12, abs=1e-13)


def _monomials(n, degree):
    return [e for e in itertools.product(range(degree + 1), repeat=n) if sum(e) <= degree]


def _fit_residual(values, points, degree):
    exps = _monomials(points.shape[1], degree)
    A = np.array([[np.prod(p.astype(float) ** np.array(e)) for e in exps] for p in points])
    coef, *_ = np.linalg.lstsq(A, values, rcond=None)
    return np.max(np.abs(A @ coef - values)) / np.max(np.abs(values))


@pytest.mark.parametrize("m", [(1, 0), (0, 1), (1, 1), (2, 0), (0, 2), (2, 1)])
def test_degree_bound(m):
    N = 5
    u = np.array([[0.7, -1.3], [2.2, 0.4]])
    enum = enumerate_simplex(2, N)
    points = enum.array
    values = np.array([eval_f1n(m, x, N, u) for x in enum])
    assert _fit_residual(values, points, sum(m)) < 1e-10
    # one degree less cannot fit: the bound is attained
    assert _fit_residual(values, points, sum(m) - 1) > 1e-4


@given(st.integers(0, 6), st.data())
def test_n1_agreement_with_2f1(N, data):
    m = data.draw(st.integers(0, N))
    x = data.draw(st.integers(0, N))
    u = data.draw(st.floats(-3, 3, allow_nan=False))
    a = eval_f1n((m,), (x,), N, [[u]])
    b = eval_2f1_terminating(m, -x, -N, u)
    assert a == pytest.approx(b, rel=1e-13, abs=1e-13)


def test_n1_classical_pfaff_and_euler():
    # exact 2F1 identities written independently of the package
    N, u = 6, Fraction(3, 5)
    for m in range(N + 1):
        for x in range(N + 1):
            lhs = hyp2f1_exact(-m, -x, -N, u, m)
            pfaff = (1 - u) ** m * hyp2f1_exact(-m, x - N, -N, u / (u - 1), m)
            assert lhs == pfaff
            assert check_pfaff_transform((m,), (x,), N, [[float(u)]]) < 1e-12
            if m + x <= N:
                pref = poch(Fraction(x - N), m) / poch(Fraction(-N), m)
                euler = pref * hyp2f1_exact(-m, -x, N + 1 - x - m, 1 - u, m)
                assert lhs == euler
                assert check_euler_transform((m,), (x,), N, [[float(u)]]) < 1e-12


def test_transforms_zero_degree_exact():
    u = np.array([[0.3, 1.7], [-0.4, 0.2]])
    assert check_pfaff_transform((0, 0), (2, 1), 4, u) == 0.0
    assert check_euler_transform((0, 0), (2, 1), 4, u) == 0.0


@pytest.mark.parametrize("seed", range(5))
def test_transforms_sampled_n2(seed):
    rng = np.random.default_rng(100 + seed)
    u = rng.integers(-14, 15, (2, 2)) / 7.0
    u[u == 1.0] = 0.5
    N = 5
    enum = enumerate_simplex(2, N)
    for _ in range(20):
        m, x = enum[int(rng.integers(len(enum)))], enum[int(rng.integers(len(enum)))]
        assert check_pfaff_transform(m, x, N, u) < 1e-10


# exhaustive sweep: a few pairs lose digits to cancellation in the transformed series
@pytest.mark.parametrize("seed", range(5))
def test_transforms_exhaustive_n2(seed):
    rng = np.random.default_rng(seed)
    u = rng.uniform(-2, 2, (2, 2))
    u[np.isclose(u, 1.0)] = 0.5
    N = 6
    enum = enumerate_simplex(2, N)
    for m in enum:
        for x in enum:
            assert check_pfaff_transform(m, x, N, u) < 1e-8
            if sum(m) + sum(x) <= N:
                assert check_euler_transform(m, x, N, u) < 1e-8


def test_transform_domain_errors():
    with pytest.raises(DomainError):
        check_pfaff_transform((1, 0), (0, 1), 2, [[0.2, 1.0], [0.3, 0.4]])
    with pytest.raises(DomainError):
        check_euler_transform((2, 1), (1, 0), 3, np.eye(2))


def test_series_requires_truncation_when_unbounded():
    with pytest.raises(DomainError):
        f1n_series([0.5], [0.7], 2.0, [[0.1]])
    assert f1n_series([0.5], [0.7], 2.0, [[0.0]]) == 1.0


def test_quadrature_examples():
    assert eval_f1n_quadrature([1.0], [0.0], 2.0, [[0.8]]) == pytest.approx(1.0, abs=1e-12)
    assert eval_f1n_quadrature([1.0], [-1.0], 3.0, [[0.5]]) == pytest.approx(1 - 0.5 / 3, abs=1e-12)


def test_quadrature_n2_against_series():
    a, b, c = [0.7, 1.3], [0.4, -1.2], 3.9
    u = np.array([[0.08, -0.05], [0.03, 0.09]])
    series = f1n_series(a, b, c, u, max_total=30)
    assert eval_f1n_quadrature(a, b, c, u) == pytest.approx(series, abs=1e-9)


def test_quadrature_domain():
    with pytest.raises(DomainError):
        eval_f1n_quadrature([1, 1, 1], [0, 0, 0], 5, np.zeros((3, 3)))
    with pytest.raises(DomainError):
        eval_f1n_quadrature([1.0], [0.5], 1.0, [[0.1]])
    with pytest.raises(DomainError):
        eval_f1n_quadrature([1.0], [0.5], 3.0, [[1.2]])


def test_quadrature_refinement_failure():
    # a sharply peaked integrand that coarse rules cannot resolve
    with pytest.raises(QuadratureError):
        eval_f1n_quadrature([1.0], [30.5], 2.0, [[0.999]], order=4)
