"""Brute-force orthogonality of the multivariable Krawtchouk polynomials.

Every inner product here is a direct weighted sum over the state simplex.
Closed-form norms are compared against these sums, never assumed. Off-diagonal
size and asymmetry are both measured relative to ``sqrt(G_ii G_jj)``, since
diagonal entries span many orders of magnitude.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .combinatorics import enumerate_simplex, multinomial_coefficient, multinomial_pmf
from .hypergeo import polynomial_table
from .params import check_orthogonality_conditions
from .tolerances import DEFAULT


def _relative_asymmetry(G):
    d = np.sqrt(np.abs(np.diag(G)))
    return float(np.max(np.abs(G - G.T) / np.outer(d, d)))


def _relative_offdiag(G):
    d = np.sqrt(np.abs(np.diag(G)))
    scale = np.outer(d, d)
    off = ~np.eye(len(G), dtype=bool)
    if not off.any():
        return 0.0
    return float(np.max(np.abs(G[off]) / scale[off]))


def closed_form_norms(delta, enumeration):
    """``prod_j delta_j^{m_j} / multinomial(N, m)`` for every degree ``m``."""
    N = enumeration.N
    return np.array([math.prod(float(d) ** k for d, k in zip(delta, m)) / multinomial_coefficient(N, m)
                     for m in enumeration])


@dataclass
class GramReport:
    n: int
    N: int
    degrees: tuple
    matrix: np.ndarray
    max_offdiag: float
    symmetry: float
    closed_form: np.ndarray | None = None
    max_diag_deviation: float | None = None
    warning: str | None = None
    extra: dict = field(default_factory=dict)

    @property
    def diagonal(self):
        return np.diag(self.matrix).copy()

    def to_dict(self):
        out = {
            "n": self.n,
            "N": self.N,
            "degrees": [list(m) for m in self.degrees],
            "diagonal": self.diagonal.tolist(),
            "max_offdiag": self.max_offdiag,
            "symmetry": self.symmetry,
        }
        if self.closed_form is not None:
            out["closed_form"] = self.closed_form.tolist()
            out["max_diag_deviation"] = self.max_diag_deviation
        if self.warning:
            out["warning"] = self.warning
        out.update(self.extra)
        return out


def _condition_warning(sp, tol):
    report = check_orthogonality_conditions(sp, tol)
    if report.passed:
        return None
    worst = max(report.residuals.items(), key=lambda kv: kv[1])
    return f"parameters violate the orthogonality conditions ({worst[0]} residual {worst[1]:.3g})"


def gram_matrix(sp, N, table=None, tol=DEFAULT):
    """``I[m, m'] = sum_x b_n(x; N; eta) P_m(x) P_m'(x)`` over the simplex."""
    enum = enumerate_simplex(sp.n, N, tol.state_limit)
    if table is None:
        table = polynomial_table(sp.u, enum)
    w = enum.multinomial_weights(sp.eta)
    G = (table * w[None, :]) @ table.T
    closed = closed_form_norms(sp.delta, enum)
    diag = np.diag(G)
    return GramReport(
        n=sp.n, N=N, degrees=tuple(enum), matrix=G,
        max_offdiag=_relative_offdiag(G),
        symmetry=_relative_asymmetry(G),
        closed_form=closed,
        max_diag_deviation=float(np.max(np.abs(diag - closed) / np.abs(closed))),
        warning=_condition_warning(sp, tol),
        extra={"table_condition": float(np.linalg.cond(table))},
    )


def dual_gram_matrix(sp, N, table=None, tol=DEFAULT):
    """``D[x, x'] = sum_m b_n(m; N; eta_bar) P_m(x) P_m(x')`` over degrees.

    The diagonal is reported against ``1 / b_n(x; N; eta)``; the ratio is a
    single constant across ``x`` when the dual orthogonality holds.
    """
    enum = enumerate_simplex(sp.n, N, tol.state_limit)
    if table is None:
        table = polynomial_table(sp.u, enum)
    wbar = np.array([multinomial_pmf(m, N, sp.eta_bar) for m in enum])
    D = (table.T * wbar[None, :]) @ table
    inv_weight = 1.0 / enum.multinomial_weights(sp.eta)
    ratio = np.diag(D) / inv_weight
    return GramReport(
        n=sp.n, N=N, degrees=tuple(enum), matrix=D,
        max_offdiag=_relative_offdiag(D),
        symmetry=_relative_asymmetry(D),
        warning=_condition_warning(sp, tol),
        extra={
            "ratio_to_inverse_weight": ratio.tolist(),
            "ratio_spread": float(np.ptp(ratio) / np.max(np.abs(ratio))),
            "predicted_ratio": float((1.0 - math.fsum(sp.eta_bar)) ** N),
        },
    )


def generating_function_sides(sp, N, m, table_row=None):
    enum = enumerate_simplex(sp.n, N)
    if table_row is None:
        from .hypergeo import eval_f1n
        table_row = np.array([eval_f1n(m, x, N, sp.u) for x in enum])
    w = enum.multinomial_weights(sp.eta)
    lhs = math.fsum(w * table_row)
    rhs = math.prod((1.0 - float(s)) ** k for s, k in zip(sp.u @ sp.eta, m))
    return lhs, rhs


def check_generating_function(sp, N, m):
    """``|sum_x b_n(x; N; eta) P_m(x) - prod_i (1 - sum_j eta_j u_ij)^{m_i}|``."""
    lhs, rhs = generating_function_sides(sp, N, m)
    return abs(lhs - rhs)


CANDIDATES = {
    "delta_definition": "prod delta_j^m_j / multinomial(N, m), delta_r = sum_s eta_s u_rs^2 - 1",
    "dual_squared": "same with delta_r = (1 - sum_s eta_bar_s^2) / eta_bar_r",
    "dual_unsquared": "same with delta_r = (1 - sum_s eta_bar_s) / eta_bar_r",
    "inverse_dual_weight": "1 / b_n(m; N; eta_bar)",
    "inverse_dual_weight_scaled": "(1 - sum eta_bar)^N / b_n(m; N; eta_bar)",
}


@dataclass
class NormAdjudication:
    degrees: tuple
    brute_force: np.ndarray
    candidates: dict
    deviations: dict

    def max_deviation(self, name):
        return float(np.max(self.deviations[name]))

    def matching(self, tol):
        return [k for k in self.candidates if self.max_deviation(k) <= tol]

    def to_dict(self):
        return {
            "degrees": [list(m) for m in self.degrees],
            "brute_force": self.brute_force.tolist(),
            "candidates": {k: {"formula": CANDIDATES[k], "values": v.tolist(),
                               "max_relative_deviation": self.max_deviation(k)}
                           for k, v in self.candidates.items()},
        }


def adjudicate_norm_formulas(sp, N, table=None, tol=DEFAULT):
    """Compare brute-force squared norms with each candidate closed form."""
    enum = enumerate_simplex(sp.n, N, tol.state_limit)
    if table is None:
        table = polynomial_table(sp.u, enum)
    w = enum.multinomial_weights(sp.eta)
    brute = np.sum(table**2 * w[None, :], axis=1)

    eb = sp.eta_bar
    total = math.fsum(eb)
    wbar = np.array([multinomial_pmf(m, N, eb) for m in enum])
    cands = {
        "delta_definition": closed_form_norms(sp.delta, enum),
        "dual_squared": closed_form_norms((1.0 - np.sum(eb**2)) / eb, enum),
        "dual_unsquared": closed_form_norms((1.0 - total) / eb, enum),
        "inverse_dual_weight": 1.0 / wbar,
        "inverse_dual_weight_scaled": (1.0 - total) ** N / wbar,
    }
    devs = {k: np.abs(v - brute) / np.abs(brute) for k, v in cands.items()}
    return NormAdjudication(tuple(enum), brute, cands, devs)
