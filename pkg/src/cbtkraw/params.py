"""Model parameters of the dice chain and the spectral parameters derived from them.

``ModelParams`` holds the probabilities of the two rolls. From them follow
the stationary multinomial parameters ``eta`` and the normaliser ``Dn``, the
``n x n`` matrix ``u`` for which the Krawtchouk polynomials are
eigenfunctions of the kernel, and the dual parameters ``eta_bar``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    ComplexRootError,
    DegenerateError,
    DomainError,
    SingularLinkError,
    SingularMatrixError,
)
from .tolerances import DEFAULT


@dataclass(frozen=True)
class ModelParams:
    N: int
    alpha: tuple
    beta: tuple

    def __post_init__(self):
        alpha = tuple(float(a) for a in self.alpha)
        beta = tuple(float(b) for b in self.beta)
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta", beta)
        if int(self.N) != self.N or self.N < 0:
            raise DomainError(f"N must be a nonnegative integer, got {self.N!r}")
        object.__setattr__(self, "N", int(self.N))
        if len(alpha) == 0 or len(alpha) != len(beta):
            raise DomainError("alpha and beta must be nonempty and of equal length")
        for name, vec in (("alpha", alpha), ("beta", beta)):
            if not all(0.0 < v < 1.0 for v in vec):
                raise DomainError(f"every {name}_k must lie strictly inside (0, 1): {vec}")
        if math.fsum(beta) >= 1.0:
            raise DomainError(f"sum(beta) must be < 1, got {math.fsum(beta)}")
        if len(set(alpha)) != len(alpha):
            raise DomainError(f"alpha entries must be pairwise distinct: {alpha}")

    @property
    def n(self):
        return len(self.alpha)

    def to_dict(self):
        return {"n": self.n, "N": self.N, "alpha": list(self.alpha), "beta": list(self.beta)}

    @classmethod
    def from_dict(cls, d):
        params = cls(N=d["N"], alpha=d["alpha"], beta=d["beta"])
        if "n" in d and d["n"] != params.n:
            raise DomainError(f"n={d['n']} does not match len(alpha)={params.n}")
        return params


@dataclass(frozen=True)
class SpectralParamSet:
    """Derived parameters. ``omega`` and ``Dn`` are ``None`` when built from a bare ``u``."""

    eta: np.ndarray
    eta_bar: np.ndarray
    u: np.ndarray
    delta: np.ndarray
    Umat: np.ndarray
    omega: np.ndarray | None = None
    Dn: float | None = None
    roots: np.ndarray | None = field(default=None, repr=False)

    @property
    def n(self):
        return len(self.eta)

    @property
    def eigen_factors(self):
        """``1 - omega_i``; the eigenvalue of degree ``m`` is ``prod (1 - omega_i)^m_i``."""
        return None if self.omega is None else 1.0 - self.omega

    def eigenvalue(self, m):
        return math.prod(float(f) ** k for f, k in zip(self.eigen_factors, m))

    @classmethod
    def from_u(cls, u, eta, omega=None, Dn=None, roots=None):
        u = np.array(u, dtype=float)
        eta = np.array(eta, dtype=float)
        with np.errstate(divide="ignore"):
            Umat = 1.0 - 1.0 / u
        return cls(eta=eta, eta_bar=compute_dual_eta(u, eta, check=False), u=u,
                   delta=compute_delta(u, eta), Umat=Umat, omega=omega, Dn=Dn, roots=roots)

    def to_dict(self):
        out = {
            "eta": self.eta.tolist(),
            "eta_bar": self.eta_bar.tolist(),
            "u": self.u.tolist(),
            "delta": self.delta.tolist(),
            "Umat": self.Umat.tolist(),
        }
        if self.omega is not None:
            out["omega"] = self.omega.tolist()
            out["eigen_factors"] = self.eigen_factors.tolist()
        if self.Dn is not None:
            out["Dn"] = self.Dn
        return out

    @classmethod
    def from_dict(cls, d):
        omega = None if d.get("omega") is None else np.array(d["omega"], dtype=float)
        return cls(eta=np.array(d["eta"], dtype=float), eta_bar=np.array(d["eta_bar"], dtype=float),
                   u=np.array(d["u"], dtype=float), delta=np.array(d["delta"], dtype=float),
                   Umat=np.array(d["Umat"], dtype=float), omega=omega, Dn=d.get("Dn"))


def compute_eta(params, tol=DEFAULT):
    """Stationary multinomial parameters ``eta`` and the normaliser ``Dn``."""
    a = np.array(params.alpha)
    b = np.array(params.beta)
    Dn = 1.0 + math.fsum(a * b / (1.0 - a))
    eta = b / ((1.0 - a) * Dn)
    if np.any(eta <= 0.0) or eta.sum() >= 1.0:
        raise DomainError(f"eta {eta} is not a sub-probability vector")
    inv = 1.0 / Dn
    r1 = (1.0 - math.fsum(eta)) / (1.0 - math.fsum(b)) - inv
    r2 = 1.0 - math.fsum(a * eta) - inv
    if max(abs(r1), abs(r2)) > tol.eta_identity:
        raise DomainError(f"eta identities violated: {r1:.3g}, {r2:.3g}")
    return eta, Dn


def u_polynomial(params):
    """Polynomial in ``t = u_i1`` whose roots give the rows of ``u``.

    Obtained by clearing the denominators ``(t - alpha_1)`` and
    ``d_k(t) = alpha_1 (1 - alpha_k) - (alpha_1 - alpha_k) t`` in the
    eigenfunction condition for the first column. Degree ``n``.
    """
    P = np.polynomial.Polynomial
    a = params.alpha
    b = params.beta
    a1 = a[0]
    d = {k: P([a1 * (1.0 - a[k]), -(a1 - a[k])]) for k in range(1, params.n)}
    shift = P([-a1, 1.0])
    prod_all = P([1.0])
    for dk in d.values():
        prod_all = prod_all * dk
    poly = (1.0 - a1) * prod_all - b[0] * shift * prod_all
    for k in d:
        others = P([1.0])
        for l, dl in d.items():
            if l != k:
                others = others * dl
        poly = poly - (1.0 - a1) * a[k] * b[k] * shift * others
    return poly


def _companion_roots(poly):
    c = poly.coef / poly.coef[-1]
    n = len(c) - 1
    comp = np.zeros((n, n))
    comp[1:, :-1] = np.eye(n - 1)
    comp[:, -1] = -c[:-1]
    return np.linalg.eigvals(comp)


def _polish(poly, t, tol, max_iter=50):
    deriv = poly.deriv()
    scale = np.sum(np.abs(poly.coef) * np.abs(t) ** np.arange(len(poly.coef)))
    for _ in range(max_iter):
        val = poly(t)
        if abs(val) <= tol * scale:
            break
        step = val / deriv(t)
        t = t - step
        if abs(step) <= 1e-16 * max(1.0, abs(t)):
            break
    return t


def _secular(lam, a, b):
    return 1.0 - math.fsum(a * b / (a - lam)), -math.fsum(a * b / (a - lam) ** 2)


def _polish_eigen(lam, a, b, max_iter=50):
    # Newton on 1 - sum_j alpha_j beta_j / (alpha_j - lam); a step is kept only if it shrinks |g|
    g, dg = _secular(lam, a, b)
    for _ in range(max_iter):
        if g == 0.0 or dg == 0.0:
            break
        trial = lam - g / dg
        gt, dgt = _secular(trial, a, b)
        if not abs(gt) < abs(g):
            break
        lam, g, dg = trial, gt, dgt
    return lam


def _solve_rows(params, tol):
    """Rows of ``u``, the roots ``t_i = u_i1`` and the eigen factors ``lam_i = 1 - omega_i``.

    Each root ``t_i`` is ``u_i1``; the rest of row ``i`` follows from
    ``u_ik = alpha_k (1 - alpha_1) t / (alpha_1 (1 - alpha_k) - (alpha_1 - alpha_k) t)``.
    That map is ill-conditioned when a root nears a pole, so each root is
    moved to ``lam = alpha_1 (1 - t) / (alpha_1 - t)``, polished there, and
    the row is rebuilt as ``u_ik = alpha_k (1 - lam) / (alpha_k - lam)``,
    which is the same map written in ``lam``.
    """
    a = np.array(params.alpha)
    b = np.array(params.beta)
    poly = u_polynomial(params)
    roots = _companion_roots(poly)
    roots = np.array([_polish(poly, t, tol.newton_residual) for t in roots])
    if np.any(np.abs(roots.imag) > tol.imag_root):
        raise ComplexRootError(f"complex roots of the u-polynomial: {roots}")
    roots = np.sort(roots.real)
    if len(roots) > 1 and np.min(np.diff(roots)) < tol.root_separation:
        raise DegenerateError(f"coincident roots of the u-polynomial: {roots}")
    a1 = a[0]
    if np.any(roots == 0.0) or np.any(roots == a1):
        raise SingularLinkError("linking denominator vanishes")
    lam = np.array([_polish_eigen(a1 * (1.0 - t) / (a1 - t), a, b) for t in roots])
    denom = a[None, :] - lam[:, None]
    if np.any(np.abs(denom) < 1e-300):
        raise SingularLinkError("linking denominator vanishes")
    u = a[None, :] * (1.0 - lam[:, None]) / denom
    return u, u[:, 0].copy(), lam


def solve_u_matrix(params, tol=DEFAULT):
    """``(u, roots)``: rows of ``u`` from the ``n`` roots of :func:`u_polynomial`, ascending."""
    u, roots, _ = _solve_rows(params, tol)
    return u, roots


def compute_omega(u, params):
    return u @ np.array(params.beta)


def link_residual(u, params):
    """Componentwise-scaled residual of the eigenfunction condition, worst entry.

    The condition ``alpha_j (1 - u_ij) = (1 - omega_i)(alpha_j - u_ij)`` with
    ``omega_i = sum_k beta_k u_ik`` is divided by the summed magnitudes of its
    expanded terms. Entries of ``u`` grow large and ``omega_i`` cancels when a
    root sits near some ``alpha_j``; the scale absorbs both.
    """
    u = np.asarray(u, dtype=float)
    a = np.array(params.alpha)[None, :]
    b = np.array(params.beta)
    lam = (1.0 - compute_omega(u, params))[:, None]
    diff = a * (1.0 - u) - lam * (a - u)
    spread = (1.0 + np.abs(u) @ b)[:, None]
    scale = a * (1.0 + np.abs(u)) + spread * (a + np.abs(u))
    return float(np.max(np.abs(diff) / scale))


def compute_dual_eta(u, eta, tol=DEFAULT, check=True):
    """Solve ``sum_j eta_bar_j u_ji = 1`` for every column ``i``."""
    u = np.asarray(u, dtype=float)
    cond = np.linalg.cond(u)
    if not np.isfinite(cond) or cond > tol.max_condition:
        raise SingularMatrixError(f"u is numerically singular (condition number {cond:.3g})")
    eta_bar = np.linalg.solve(u.T, np.ones(len(u)))
    if check and abs(math.fsum(eta_bar) - math.fsum(eta)) > tol.dual_sum:
        raise DomainError(f"sum(eta_bar)={eta_bar.sum()} differs from sum(eta)={eta.sum()}")
    return eta_bar


def compute_delta(u, eta):
    u = np.asarray(u, dtype=float)
    return (u**2) @ np.asarray(eta, dtype=float) - 1.0


def check_geometry(u):
    """Residuals ``|U_jk U_nn - U_nk U_jn|`` for ``j, k < n`` with ``U = 1 - 1/u``."""
    u = np.asarray(u, dtype=float)
    if np.any(u == 0.0):
        raise DomainError("geometry relation needs every u_ij != 0")
    U = 1.0 - 1.0 / u
    return np.abs(U[:-1, :-1] * U[-1, -1] - U[-1:, :-1] * U[:-1, -1:])


def solve_spectral(params, tol=DEFAULT):
    """Full :class:`SpectralParamSet` for a model, with solver postconditions enforced."""
    eta, Dn = compute_eta(params, tol)
    u, roots, lam = _solve_rows(params, tol)
    link = link_residual(u, params)
    if link > tol.link_equation:
        raise SingularLinkError(f"eigenfunction condition residual {link:.3g}")
    # 1 - lam equals u @ beta, but that sum cancels when u has large entries
    omega = 1.0 - lam
    sp = SpectralParamSet.from_u(u, eta, omega=omega, Dn=Dn, roots=roots)
    compute_dual_eta(u, eta, tol)
    return sp


@dataclass
class ConditionReport:
    residuals: dict
    tolerance: float

    @property
    def passed(self):
        return all(v <= self.tolerance for v in self.residuals.values())

    def to_dict(self):
        return {"tolerance": self.tolerance, "passed": self.passed,
                "residuals": dict(self.residuals)}


def check_orthogonality_conditions(sp, tol=DEFAULT):
    """Max residuals of the necessary, dual, cross and mixed parameter relations.

    ``row_sums``: ``sum_j eta_j u_ij = 1``; ``dual_column_sums``:
    ``sum_j eta_bar_j u_ji = 1``; ``cross``: ``sum_j eta_j u_rj u_sj = 1``
    for ``r != s``; ``mixed``: ``sum_j eta_j u_rj (1 - u_sj) = 0`` for ``r != s``.
    """
    u, eta, eta_bar = sp.u, sp.eta, sp.eta_bar
    n = len(eta)
    off = ~np.eye(n, dtype=bool)
    cross = (u * eta) @ u.T
    mixed = (u * eta) @ (1.0 - u).T
    residuals = {
        "row_sums": float(np.max(np.abs(u @ eta - 1.0))),
        "dual_column_sums": float(np.max(np.abs(u.T @ eta_bar - 1.0))),
        "cross": float(np.max(np.abs(cross[off] - 1.0))) if n > 1 else 0.0,
        "mixed": float(np.max(np.abs(mixed[off]))) if n > 1 else 0.0,
    }
    return ConditionReport(residuals, tol.condition_report)
