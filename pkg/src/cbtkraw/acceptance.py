"""The acceptance criteria as runnable checks.

Each criterion returns a :class:`Criterion` with a pass flag and a one-line
detail; :func:`run_all` runs them in order. Used by ``tests/test_acceptance.py``
and by ``cbtkraw verify-all``.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from .combinatorics import enumerate_simplex
from .errors import ComplexRootError, DegenerateError
from .hypergeo import (
    check_euler_transform,
    check_pfaff_transform,
    eval_f1n_quadrature,
    f1n_series,
    polynomial_table,
)
from .kernel import build_kernel, check_detailed_balance, eigen_check, spectral_reconstruct
from .ortho import adjudicate_norm_formulas, gram_matrix, generating_function_sides
from .params import (
    ModelParams,
    SpectralParamSet,
    check_geometry,
    check_orthogonality_conditions,
    solve_spectral,
)
from .sim import SimConfig, run
from .tolerances import DEFAULT

DEMO = ModelParams(N=6, alpha=(0.3, 0.2), beta=(0.25, 0.35))
DEMO3 = ModelParams(N=4, alpha=(0.3, 0.2, 0.6), beta=(0.2, 0.3, 0.1))


@dataclass
class Criterion:
    number: int
    stage: str
    title: str
    passed: bool
    detail: str
    seconds: float

    def line(self):
        flag = "PASS" if self.passed else "FAIL"
        return f"[{flag}] {self.number:2d} {self.title}: {self.detail} ({self.seconds:.2f} s)"

    def to_dict(self):
        return {"number": self.number, "stage": self.stage, "title": self.title,
                "passed": self.passed, "detail": self.detail, "seconds": self.seconds}


def _rel(a, b):
    return abs(a - b) / abs(b)


def random_model(rng, n, N):
    alpha = rng.uniform(0.05, 0.95, n)
    beta = rng.dirichlet(np.ones(n + 1))[:n]
    return ModelParams(N=N, alpha=tuple(alpha), beta=tuple(beta))


def closed_forms_n1(tol=DEFAULT, seed=1):
    """u, eta and eigenvalues at n = 1 against their closed forms."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(20):
        a, b = rng.uniform(0.05, 0.95, 2)
        sp = solve_spectral(ModelParams(N=5, alpha=(a,), beta=(b,)), tol)
        worst = max(worst, _rel(sp.u[0, 0], a + (1 - a) / b),
                    _rel(sp.eta[0], b / ((1 - a) + a * b)))
        for k in range(6):
            worst = max(worst, _rel(sp.eigenvalue((k,)), (a * (1 - b)) ** k))
    return worst <= tol.closed_form, f"max relative error {worst:.2e} (tol {tol.closed_form:g})"


def orthogonality_n2(tol=DEFAULT, model=DEMO):
    sp = solve_spectral(model, tol)
    g = gram_matrix(sp, model.N, tol=tol)
    ok = g.max_offdiag < tol.gram_offdiag and g.max_diag_deviation < tol.gram_diag
    return ok, (f"{len(g.degrees)}x{len(g.degrees)} Gram, off-diagonal {g.max_offdiag:.2e}, "
                f"diagonal vs closed form {g.max_diag_deviation:.2e}")


def orthogonality_n3(tol=DEFAULT, model=DEMO3):
    sp = solve_spectral(model, tol)
    g = gram_matrix(sp, model.N, tol=tol)
    ok = g.max_offdiag < tol.gram_offdiag_n3
    return ok, f"{len(g.degrees)}x{len(g.degrees)} Gram, off-diagonal {g.max_offdiag:.2e}"


def eigen_n2(tol=DEFAULT, model=DEMO):
    sp = solve_spectral(model, tol)
    kern = build_kernel(model, tol)
    table = polynomial_table(sp.u, kern.enumeration)
    rep = eigen_check(kern, sp, table, tol)
    norms = gram_matrix(sp, model.N, table, tol).diagonal
    recon = spectral_reconstruct(kern, sp, norms, table)
    ok = rep.max_residual < tol.eigen and recon < tol.reconstruct
    return ok, (f"{len(rep.degrees)} eigenpairs, max residual {rep.max_residual:.2e}, "
                f"reconstruction {recon:.2e}")


def balance_instances(model=DEMO):
    yield ModelParams(N=1, alpha=(0.5,), beta=(0.5,))
    yield ModelParams(N=2, alpha=(0.5,), beta=(0.5,))
    yield ModelParams(N=8, alpha=(0.7,), beta=(0.2,))
    yield model
    yield ModelParams(N=8, alpha=(0.3, 0.2), beta=(0.25, 0.35))
    yield ModelParams(N=4, alpha=(0.3, 0.2, 0.6), beta=(0.2, 0.3, 0.1))
    yield ModelParams(N=8, alpha=(0.15, 0.55, 0.8), beta=(0.3, 0.1, 0.4))


def balance(tol=DEFAULT, model=DEMO):
    worst_bal = worst_col = 0.0
    count = 0
    for params in balance_instances(model):
        kern = build_kernel(params, tol)
        worst_bal = max(worst_bal, check_detailed_balance(kern))
        worst_col = max(worst_col, kern.column_sum_residual())
        count += 1
    ok = worst_bal < tol.balance and worst_col < tol.stochastic
    return ok, f"{count} kernels, balance {worst_bal:.2e}, column sums {worst_col:.2e}"


def parameter_web(tol=DEFAULT, seed=2):
    rng = np.random.default_rng(seed)
    parts = []
    ok = True
    for n in (2, 3):
        survivors = excluded = 0
        worst = {"conditions": 0.0, "geometry": 0.0, "dual_sum": 0.0}
        for _ in range(20):
            params = random_model(rng, n, 4)
            try:
                sp = solve_spectral(params, tol)
            except (ComplexRootError, DegenerateError):
                excluded += 1
                continue
            survivors += 1
            worst["conditions"] = max(worst["conditions"], *check_orthogonality_conditions(sp, tol).residuals.values())
            worst["geometry"] = max(worst["geometry"], float(np.max(check_geometry(sp.u))))
            worst["dual_sum"] = max(worst["dual_sum"], abs(math.fsum(sp.eta) - math.fsum(sp.eta_bar)))
        ok &= (survivors >= 10 and worst["conditions"] < tol.cross
               and worst["geometry"] < tol.geometry and worst["dual_sum"] < tol.dual_sum)
        parts.append(f"n={n}: {survivors} solved, {excluded} excluded, conditions {worst['conditions']:.1e}, "
                     f"geometry {worst['geometry']:.1e}, sums {worst['dual_sum']:.1e}")
    return ok, "; ".join(parts)


def _random_u(rng, n):
    while True:
        u = rng.uniform(-2.0, 2.0, (n, n))
        if np.all(np.abs(1.0 - u[:, -1]) > 0.05):
            return u


def _random_pair(rng, n, N, joint):
    """Degree and state; with ``joint`` their totals together stay within N."""
    total_m = int(rng.integers(0, N + 1))
    m = rng.multinomial(total_m, np.ones(n + 1) / (n + 1))[:n]
    cap = N - m.sum() if joint else N
    total_x = int(rng.integers(0, cap + 1))
    x = rng.multinomial(total_x, np.ones(n + 1) / (n + 1))[:n]
    return tuple(int(v) for v in m), tuple(int(v) for v in x)


def quadrature_instances(rng):
    """20 admissible parameter sets, paired with a series oracle value."""
    out = []
    for k in range(20):
        n = 1 + k % 2
        a = rng.uniform(0.3, 2.0, n)
        c = a.sum() + rng.uniform(0.5, 2.5)
        if k < 10:
            # terminating columns: the series is a finite sum
            b = -rng.integers(0, 4, n).astype(float)
            u = rng.uniform(-1.5, 1.5, (n, n))
            oracle = f1n_series(a, b, c, u)
        else:
            b = rng.uniform(-1.5, 2.5, n)
            u = rng.uniform(-0.1, 0.1, (n, n))
            oracle = f1n_series(a, b, c, u, max_total=24)
            tail = abs(oracle - f1n_series(a, b, c, u, max_total=23))
            if tail >= 1e-10:
                raise RuntimeError(f"series oracle not converged (last shell {tail:.2e})")
        out.append((a, b, c, u, oracle))
    return out


def transforms(tol=DEFAULT, seed=3):
    rng = np.random.default_rng(seed)
    worst_euler = worst_pfaff = 0.0
    for k in range(100):
        n = 1 + k % 3
        N = int(rng.integers(1, 7))
        u = _random_u(rng, n)
        m, x = _random_pair(rng, n, N, joint=True)
        worst_euler = max(worst_euler, check_euler_transform(m, x, N, u))
        m, x = _random_pair(rng, n, N, joint=False)
        worst_pfaff = max(worst_pfaff, check_pfaff_transform(m, x, N, u))
    worst_quad = 0.0
    for a, b, c, u, oracle in quadrature_instances(rng):
        worst_quad = max(worst_quad, abs(eval_f1n_quadrature(a, b, c, u, tol=tol.quadrature) - oracle))
    ok = worst_euler < tol.transform and worst_pfaff < tol.transform and worst_quad < tol.quadrature
    return ok, (f"u->1-u {worst_euler:.1e}, Pfaff {worst_pfaff:.1e} (100 each); "
                f"quadrature vs series {worst_quad:.1e} (20)")


def generating_function(tol=DEFAULT, seed=4, model=DEMO):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(50):
        N = int(rng.integers(1, 6))
        eta = rng.dirichlet(np.ones(3))[:2]
        sp = SpectralParamSet.from_u(rng.uniform(-1.5, 1.5, (2, 2)), eta)
        m = tuple(int(v) for v in rng.multinomial(int(rng.integers(0, N + 1)), [1 / 3] * 3)[:2])
        lhs, rhs = generating_function_sides(sp, N, m)
        worst = max(worst, abs(lhs - rhs))
    sp = solve_spectral(model, tol)
    N = min(model.N, 5)
    worst_solved = 0.0
    for m in enumerate_simplex(2, N):
        if any(m):
            worst_solved = max(worst_solved, *map(abs, generating_function_sides(sp, N, m)))
    ok = worst < tol.generating_function and worst_solved < tol.generating_function
    return ok, f"generic u {worst:.1e} (50), solved sides max {worst_solved:.1e}"


def norm_adjudication(tol=DEFAULT, model=DEMO):
    worst = 0.0
    for eta, N in ((1 / 3, 2), (0.5, 1), (0.2, 5), (0.7, 4)):
        sp = SpectralParamSet.from_u([[1.0 / eta]], [eta])
        worst = max(worst, adjudicate_norm_formulas(sp, N, tol=tol).max_deviation("delta_definition"))
    sp = SpectralParamSet.from_u([[3.0]], [1 / 3])
    rep = adjudicate_norm_formulas(sp, 2, tol=tol)
    i = rep.degrees.index((1,))
    squared_ratio = rep.candidates["dual_squared"][i] / rep.brute_force[i]
    sp2 = solve_spectral(ModelParams(N=4, alpha=model.alpha, beta=model.beta), tol)
    rep2 = adjudicate_norm_formulas(sp2, 4, tol=tol)
    ok = (worst < tol.adjudicate_n1 and abs(squared_ratio - 4 / 3) < tol.adjudicate_n1
          and rep2.max_deviation("delta_definition") < tol.gram_diag)
    return ok, (f"n=1 closed form {worst:.1e}, squared-dual ratio {squared_ratio:.12g} (expect 4/3), "
                f"n=2 matching: {', '.join(rep2.matching(tol.gram_diag))}")


def simulation(tol=DEFAULT, model=DEMO, seed=20111227):
    params = ModelParams(N=3, alpha=model.alpha, beta=model.beta)
    config = SimConfig(params, steps=10_100, burn_in=100, seed=seed, chains=100)
    report = run(config, tol)
    again = run(config, tol)
    identical = report.to_dict() == again.to_dict()
    _, _, p_stat = report.stationary_test()
    col = report.column_tests()
    p_col = min(p for *_, p in col)
    ok = identical and p_stat > tol.significance and p_col > tol.significance and report.samples == 1_000_000
    return ok, (f"{report.samples} transitions, stationary p={p_stat:.3f}, "
                f"min column p={p_col:.3f} over {len(col)} columns, reproducible={identical}")


# number, stage, title, function, runtime limit in seconds (None: no limit)
CRITERIA = [
    (1, "closed-form", "n=1 closed forms", closed_forms_n1, 1.0),
    (2, "orthogonality", "orthogonality n=2 N=6", orthogonality_n2, 30.0),
    (3, "orthogonality", "orthogonality n=3 N=4", orthogonality_n3, 120.0),
    (4, "eigen", "eigen suite n=2 N=6", eigen_n2, 30.0),
    (5, "balance", "detailed balance and stochasticity", balance, None),
    (6, "params", "parameter web", parameter_web, None),
    (7, "transforms", "transformation identities", transforms, None),
    (8, "genfun", "generating function", generating_function, None),
    (9, "adjudicate", "norm adjudication", norm_adjudication, None),
    (10, "simulate", "simulation", simulation, 60.0),
]

STAGES = sorted({stage for _, stage, *_ in CRITERIA})
MODEL_AWARE = {orthogonality_n2, eigen_n2, balance, generating_function, norm_adjudication, simulation}


def run_criterion(entry, tol=DEFAULT, model=None):
    number, stage, title, func, limit = entry
    kwargs = {"tol": tol}
    if model is not None and func in MODEL_AWARE:
        kwargs["model"] = model
    start = time.perf_counter()
    try:
        ok, detail = func(**kwargs)
    except Exception as exc:  # a crash is a failed criterion, reported not raised
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    seconds = time.perf_counter() - start
    if limit is not None and seconds >= limit:
        ok = False
        detail += f"; runtime {seconds:.1f} s exceeds {limit:g} s"
    return Criterion(number, stage, title, bool(ok), detail, seconds)


def run_all(tol=DEFAULT, model=None, skip=()):
    return [run_criterion(entry, tol, model) for entry in CRITERIA if entry[1] not in skip]
