"""Terminating multivariable hypergeometric series and their identities.

The central object is the ``n x n``-indexed series

    F(a; b; c; u) = sum over nonnegative integer grids k of
        prod_i (a_i)_{row_i(k)} prod_j (b_j)_{col_j(k)}
        / (prod_ij k_ij! (c)_{|k|}) * prod_ij u_ij^k_ij

whose specialisation ``a = -m, b = -x, c = -N`` is the multivariable
Krawtchouk polynomial ``P_m(x)`` (:func:`eval_f1n`). Upper parameters that are
nonpositive integers cap the row or column sums and make the sum finite.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import roots_jacobi

from .combinatorics import as_multi_index, pochhammer
from .errors import DomainError, QuadratureError


def _nonpos_int(v):
    return float(v) == math.floor(v) and v <= 0


def _as_matrix(u, n):
    u = np.asarray(u, dtype=float)
    if u.shape != (n, n):
        raise DomainError(f"u must be {n}x{n}, got shape {u.shape}")
    if not np.all(np.isfinite(u)):
        raise DomainError("u has non-finite entries")
    return u


def _grid_sum(a, b, c, u, row_caps, col_caps, total_cap):
    """Sum the series over all grids allowed by the caps.

    Grids are generated depth first, cell by cell in row-major order, each
    cell value ascending; a branch stops as soon as its row, column or total
    budget is spent. Terms are combined with ``math.fsum`` (exactly rounded),
    so the result does not depend on accumulation order.
    """
    n = len(a)
    big = total_cap
    rc = [big if r is None else min(r, big) for r in row_caps]
    cc = [big if s is None else min(s, big) for s in col_caps]
    tmax = min(total_cap, sum(rc), sum(cc))

    # per-call Pochhammer and monomial tables
    pa = [[pochhammer(a[i], r) for r in range(rc[i] + 1)] for i in range(n)]
    pb = [[pochhammer(b[j], s) for s in range(cc[j] + 1)] for j in range(n)]
    pc = [pochhammer(c, t) for t in range(tmax + 1)]
    if any(v == 0.0 for v in pc):
        raise DomainError(f"lower parameter {c} makes (c)_k vanish inside the summation range")
    cells = [(i, j) for i in range(n) for j in range(n)]
    mono = []
    for i, j in cells:
        top = min(rc[i], cc[j])
        if u[i, j] == 0.0:
            top = 0
        mono.append([u[i, j] ** k / math.factorial(k) for k in range(top + 1)])

    rows = [0] * n
    cols = [0] * n
    terms = []

    def visit(pos, total, partial):
        if pos == len(cells):
            t = partial / pc[total]
            for i in range(n):
                t *= pa[i][rows[i]]
            for j in range(n):
                t *= pb[j][cols[j]]
            terms.append(t)
            return
        i, j = cells[pos]
        table = mono[pos]
        top = min(len(table) - 1, rc[i] - rows[i], cc[j] - cols[j], tmax - total)
        for v in range(top + 1):
            rows[i] += v
            cols[j] += v
            visit(pos + 1, total + v, partial * table[v])
            rows[i] -= v
            cols[j] -= v

    visit(0, 0, 1.0)
    return math.fsum(terms)


def f1n_series(a, b, c, u, max_total=None):
    """General series with upper parameters ``a`` (rows), ``b`` (columns), lower ``c``.

    The sum is finite when every cell is capped: a row with nonpositive
    integer ``a_i`` is capped at ``-a_i``, likewise columns. Otherwise pass
    ``max_total`` to truncate at grids of total size ``max_total``.
    """
    n = len(a)
    if len(b) != n:
        raise DomainError("a and b must have equal length")
    u = _as_matrix(u, n)
    row_caps = [int(-v) if _nonpos_int(v) else None for v in a]
    col_caps = [int(-v) if _nonpos_int(v) else None for v in b]
    if max_total is None:
        inf = math.inf
        cell_total = 0
        for i in range(n):
            for j in range(n):
                cap = min(inf if row_caps[i] is None else row_caps[i],
                          inf if col_caps[j] is None else col_caps[j])
                if cap == inf and u[i, j] != 0.0:
                    raise DomainError("series does not terminate; pass max_total")
                cell_total += 0 if cap == inf else cap
        max_total = int(min(sum(inf if r is None else r for r in row_caps),
                            sum(inf if s is None else s for s in col_caps),
                            cell_total))
    return _grid_sum(list(map(float, a)), list(map(float, b)), float(c), u,
                     row_caps, col_caps, max_total)


def eval_f1n(m, x, N, u):
    """Multivariable Krawtchouk polynomial ``P_m(x)`` with parameter matrix ``u``."""
    m = as_multi_index(m, N)
    x = as_multi_index(x, N)
    n = len(m)
    if len(x) != n:
        raise DomainError("m and x must have equal length")
    u = _as_matrix(u, n)
    return _grid_sum([-float(v) for v in m], [-float(v) for v in x], -float(N), u,
                     list(m), list(x), N)


def polynomial_table(u, enumeration):
    """Matrix ``T[i, j] = P_{m_i}(x_j)`` over one enumeration used for both degrees and states."""
    N = enumeration.N
    u = _as_matrix(u, enumeration.n)
    S = len(enumeration)
    out = np.empty((S, S))
    for i, m in enumerate(enumeration):
        for j, x in enumerate(enumeration):
            out[i, j] = eval_f1n(m, x, N, u)
    return out


def eval_2f1_terminating(n_deg, a, c, z):
    """``2F1(-n_deg, a; c; z)`` as a finite sum."""
    if n_deg < 0:
        raise DomainError("degree must be nonnegative")
    upper = n_deg
    if _nonpos_int(a):
        upper = min(upper, int(-a))
    if _nonpos_int(c) and -c < upper:
        raise DomainError(f"(c)_k vanishes at k={int(-c) + 1} before the series terminates")
    terms = []
    t = 1.0
    for k in range(upper + 1):
        terms.append(t)
        if k < upper:
            t *= (-n_deg + k) * (a + k) * z / ((k + 1) * (c + k))
    return math.fsum(terms)


def _relative(lhs, rhs):
    scale = max(abs(lhs), abs(rhs))
    return 0.0 if scale == 0.0 else abs(lhs - rhs) / scale


def pfaff_sides(m, x, N, u):
    """Both sides of the last-column Pfaff-type transformation.

    Row ``i`` of ``u`` is replaced by ``(u_ij - u_in) / (1 - u_in)`` for
    ``j < n`` and ``-u_in / (1 - u_in)`` in the last column; the last lower
    column parameter becomes ``-(N - sum(x))`` and the prefactor is
    ``prod_i (1 - u_in)^{m_i}``.
    """
    m = as_multi_index(m, N)
    x = as_multi_index(x, N)
    n = len(m)
    u = _as_matrix(u, n)
    last = u[:, -1]
    if np.any(last == 1.0):
        raise DomainError("Pfaff transformation needs u_in != 1 in every row")
    v = (u - last[:, None]) / (1.0 - last[:, None])
    v[:, -1] = -last / (1.0 - last)
    lhs = eval_f1n(m, x, N, u)
    b = [-float(t) for t in x[:-1]] + [-float(N - sum(x))]
    pref = math.prod((1.0 - last[i]) ** m[i] for i in range(n))
    rhs = pref * f1n_series([-float(t) for t in m], b, -float(N), v)
    return lhs, rhs


def check_pfaff_transform(m, x, N, u):
    """Relative residual of the Pfaff-type transformation (0 means exact)."""
    return _relative(*pfaff_sides(m, x, N, u))


def euler_sides(m, x, N, u):
    """Both sides of the ``u -> 1 - u`` transformation.

    ``P_m(x) = (|x| - N)_{|m|} / (-N)_{|m|} * F(-m; -x; N + 1 - |x| - |m|; 1 - u)``.
    The right side is finite only for ``|x| + |m| <= N``.
    """
    m = as_multi_index(m)
    x = as_multi_index(x)
    sm, sx = sum(m), sum(x)
    if sm > N:
        raise DomainError(f"(-N)_|m| vanishes: |m|={sm} > N={N}")
    if sm + sx > N:
        raise DomainError(f"|m| + |x| = {sm + sx} > N={N}: the right side is singular")
    n = len(m)
    u = _as_matrix(u, n)
    lhs = eval_f1n(m, x, N, u)
    pref = pochhammer(sx - N, sm) / pochhammer(-N, sm)
    rhs = pref * f1n_series([-float(t) for t in m], [-float(t) for t in x],
                            float(N + 1 - sx - sm), 1.0 - u)
    return lhs, rhs


def check_euler_transform(m, x, N, u):
    return _relative(*euler_sides(m, x, N, u))


def _dirichlet_integral(a, c, integrand, order):
    # stick-breaking map of the simplex: xi_1 = s_1, xi_k = s_k prod_{l<k} (1 - s_l);
    # level k carries Jacobi weight s^{a_k - 1} (1 - s)^{c - a_1 - ... - a_k - 1}
    nodes, weights = [], []
    used = 0.0
    for ak in a:
        used += ak
        alpha, beta = c - used - 1.0, ak - 1.0
        x, w = roots_jacobi(order, alpha, beta)
        nodes.append((1.0 + x) / 2.0)
        weights.append(w / 2.0 ** (alpha + beta + 1.0))
    grids = np.meshgrid(*nodes, indexing="ij")
    wgrid = np.ones_like(grids[0])
    for k, w in enumerate(weights):
        shape = [1] * len(a)
        shape[k] = order
        wgrid = wgrid * w.reshape(shape)
    xi = []
    remaining = np.ones_like(grids[0])
    for s in grids:
        xi.append(s * remaining)
        remaining = remaining * (1.0 - s)
    return float(np.sum(wgrid * integrand(np.stack(xi))))


def eval_f1n_quadrature(a, b, c, u, order=64, tol=1e-6):
    """Evaluate the series through its Dirichlet-type simplex integral.

    Valid for ``a_i > 0`` and ``c - sum(a) > 0`` and ``n <= 2``. The estimate
    at ``order`` nodes per axis is compared with ``order // 2`` nodes;
    a difference above ``tol`` raises :class:`QuadratureError`.
    """
    a = [float(v) for v in a]
    b = [float(v) for v in b]
    n = len(a)
    if n > 2:
        raise DomainError("quadrature oracle is limited to n <= 2")
    if len(b) != n:
        raise DomainError("a and b must have equal length")
    u = _as_matrix(u, n)
    if min(a) <= 0.0 or c - sum(a) <= 0.0:
        raise DomainError("need a_i > 0 and c - sum(a) > 0")
    for j in range(n):
        # 1 - sum_k xi_k u_kj is affine, so positivity at the vertices suffices
        if not _nonpos_int(b[j]) and np.any(1.0 - u[:, j] <= 0.0):
            raise DomainError(f"integrand unbounded: column {j} has u_kj >= 1")

    def integrand(xi):
        out = np.ones(xi.shape[1:])
        for j in range(n):
            base = 1.0 - np.tensordot(u[:, j], xi, axes=1)
            out = out * base ** (-b[j])
        return out

    pref = math.exp(math.lgamma(c) - math.lgamma(c - sum(a)) - sum(math.lgamma(v) for v in a))
    fine = pref * _dirichlet_integral(a, c, integrand, order)
    coarse = pref * _dirichlet_integral(a, c, integrand, max(order // 2, 1))
    if abs(fine - coarse) > tol:
        raise QuadratureError(f"quadrature refinement changed the value by {abs(fine - coarse):.3g}")
    return fine
