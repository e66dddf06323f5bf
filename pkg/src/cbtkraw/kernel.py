"""Transition kernel of the cumulative Bernoulli trials chain and its eigensystem.

Matrices are stored ``K[to, from]`` over a :class:`SimplexEnumeration`, so
each column is the law of the next state given the current one and columns
sum to one.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .combinatorics import binomial_pmf, enumerate_simplex, multinomial_pmf
from .errors import CBTError, DomainError
from .hypergeo import polynomial_table
from .params import compute_eta
from .tolerances import DEFAULT


@dataclass(frozen=True)
class TransitionKernel:
    params: object
    enumeration: object
    matrix: np.ndarray
    stationary: np.ndarray

    @property
    def size(self):
        return len(self.enumeration)

    def column_sum_residual(self):
        return float(np.max(np.abs(self.matrix.sum(axis=0) - 1.0)))

    def stationarity_residual(self):
        return float(np.max(np.abs(self.matrix @ self.stationary - self.stationary)))


def build_kernel(params, tol=DEFAULT):
    """Dense kernel: keep ``k_r ~ Bin(i_r, alpha_r)`` successes, reroll the other ``N - |k|`` dice."""
    n, N = params.n, params.N
    enum = enumerate_simplex(n, N, tol.state_limit)
    S = len(enum)
    radix = enum.radix
    lookup = enum.code_lookup
    beta = params.beta

    # second-roll law for every possible number of rerolled dice
    reroll = []
    for M in range(N + 1):
        sub = enumerate_simplex(n, M)
        reroll.append((sub.array @ radix, np.array([multinomial_pmf(d, M, beta) for d in sub])))

    K = np.zeros((S, S))
    for col, i in enumerate(enum):
        for k in itertools.product(*(range(ir + 1) for ir in i)):
            w = 1.0
            for kr, ir, ar in zip(k, i, params.alpha):
                w *= binomial_pmf(kr, ir, ar)
            codes, pmf = reroll[N - sum(k)]
            rows = lookup[codes + np.dot(k, radix)]
            K[rows, col] += w * pmf

    eta, _ = compute_eta(params, tol)
    kern = TransitionKernel(params, enum, K, enum.multinomial_weights(eta))
    if np.any(K < 0.0) or kern.column_sum_residual() > tol.stochastic:
        raise CBTError(f"kernel is not column stochastic (residual {kern.column_sum_residual():.3g})")
    return kern


def check_detailed_balance(kern):
    """``max |K(j;i) phi(i) - K(i;j) phi(j)|`` over all state pairs."""
    flow = kern.matrix * kern.stationary[None, :]
    return float(np.max(np.abs(flow - flow.T)))


@dataclass
class EigenReport:
    degrees: tuple
    eigenvalues: np.ndarray
    residuals: np.ndarray
    rayleigh: np.ndarray
    tolerance: float

    @property
    def max_residual(self):
        return float(np.max(self.residuals))

    @property
    def passed(self):
        return self.max_residual < self.tolerance

    def to_dict(self):
        return {
            "degrees": [list(m) for m in self.degrees],
            "eigenvalues": self.eigenvalues.tolist(),
            "residuals": self.residuals.tolist(),
            "rayleigh": self.rayleigh.tolist(),
            "max_residual": self.max_residual,
            "tolerance": self.tolerance,
            "passed": self.passed,
        }


def eigenvalues(sp, enumeration):
    return np.array([sp.eigenvalue(m) for m in enumeration])


def eigen_check(kern, sp, table=None, tol=DEFAULT):
    """Check ``K psi_m = lambda_m psi_m`` with ``psi_m = phi_0 * P_m`` for every degree."""
    if sp.omega is None:
        raise DomainError("eigen check needs a spectral set solved from model parameters")
    enum = kern.enumeration
    if table is None:
        table = polynomial_table(sp.u, enum)
    lam = eigenvalues(sp, enum)
    psi = table * kern.stationary[None, :]
    image = psi @ kern.matrix.T
    residuals = np.max(np.abs(image - lam[:, None] * psi), axis=1) / np.max(np.abs(psi), axis=1)
    rayleigh = np.sum(table * image, axis=1) / np.sum(table * psi, axis=1)
    return EigenReport(tuple(enum), lam, residuals, rayleigh, tol.eigen)


def reconstruct_kernel(kern, sp, norms, table=None, max_degree=None):
    """``phi_0(j) sum_m lambda_m P_m(i) P_m(j) / norm_m`` over degrees with ``|m| <= max_degree``."""
    norms = np.asarray(norms, dtype=float)
    if np.any(norms <= 0.0):
        raise DomainError("spectral reconstruction needs strictly positive norms")
    enum = kern.enumeration
    if table is None:
        table = polynomial_table(sp.u, enum)
    lam = eigenvalues(sp, enum)
    keep = np.array([max_degree is None or sum(m) <= max_degree for m in enum])
    coef = (lam / norms)[keep]
    T = table[keep]
    return kern.stationary[:, None] * ((T * coef[:, None]).T @ T)


def spectral_reconstruct(kern, sp, norms, table=None):
    """Max entrywise deviation of the spectral sum from the kernel."""
    return float(np.max(np.abs(reconstruct_kernel(kern, sp, norms, table) - kern.matrix)))
