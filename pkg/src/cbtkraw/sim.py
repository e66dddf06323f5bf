"""Monte Carlo simulation of the dice process and goodness-of-fit against the kernel.

Randomness comes from numpy's PCG64 seeded through ``SeedSequence``.
Independent runs derive their seeds with :func:`spawn_seeds`, which uses
``SeedSequence.spawn``, so split runs are reproducible and
:func:`merge_reports` gives the same answer in any grouping.

Binomial draws are by inversion against precomputed CDF tables (at most
``N + 1`` trials each); the second-roll multinomial is drawn as a chain of
conditional binomials.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.stats import chi2

from .combinatorics import as_multi_index, binomial_pmf, enumerate_simplex
from .errors import DomainError
from .kernel import build_kernel
from .params import ModelParams, solve_spectral
from .tolerances import DEFAULT

BLOCK = 256


def step(state, params, rng):
    """One transition of the dice process from ``state``."""
    state = as_multi_index(state, params.N)
    kept = rng.binomial(np.array(state), np.array(params.alpha))
    rest = params.N - int(kept.sum())
    probs = list(params.beta) + [max(0.0, 1.0 - math.fsum(params.beta))]
    gained = rng.multinomial(rest, probs)[:-1]
    return tuple(int(v) for v in kept + gained)


@dataclass(frozen=True)
class SimConfig:
    params: ModelParams
    steps: int
    burn_in: int = 0
    seed: int = 0
    initial_state: tuple | None = None
    chains: int = 1
    thin: int | None = None

    def __post_init__(self):
        if not self.steps > self.burn_in >= 0:
            raise DomainError(f"need steps > burn_in >= 0, got steps={self.steps}, burn_in={self.burn_in}")
        if self.chains < 1:
            raise DomainError("need at least one chain")
        if not 0 <= self.seed < 2**64:
            raise DomainError("seed must be an unsigned 64-bit integer")
        init = self.initial_state
        if init is None:
            init = (0,) * self.params.n
        init = as_multi_index(init, self.params.N)
        if len(init) != self.params.n:
            raise DomainError("initial state has the wrong length")
        object.__setattr__(self, "initial_state", init)
        if self.thin is not None and self.thin < 1:
            raise DomainError("thin must be >= 1")


def spawn_seeds(seed, count):
    """Child seeds for independent runs: ``SeedSequence(seed).spawn(count)``, first 64-bit word of each."""
    return [int(child.generate_state(1, np.uint64)[0]) for child in np.random.SeedSequence(seed).spawn(count)]


def _inversion_tables(params):
    N = params.N
    probs = list(params.alpha)
    left = 1.0
    for b in params.beta:
        probs.append(min(1.0, b / left))
        left -= b
    cdf = np.ones((len(probs), N + 1, N + 1))
    for p_idx, p in enumerate(probs):
        for t in range(N + 1):
            acc = 0.0
            for k in range(t):
                acc += binomial_pmf(k, t, p)
                cdf[p_idx, t, k] = min(acc, 1.0)
    return cdf


def _draw(cdf_p, trials, u):
    return np.sum(cdf_p[trials] <= u[:, None], axis=1)


def chi_square(observed, expected, min_expected=5.0):
    """Pearson statistic with cells of expected count below ``min_expected`` pooled.

    Returns ``(statistic, dof, p_value)``. An observation in a zero-probability
    cell gives an infinite statistic.
    """
    observed = np.asarray(observed, dtype=float)
    expected = np.asarray(expected, dtype=float)
    impossible = expected <= 0.0
    if np.any(observed[impossible] > 0):
        return math.inf, 0, 0.0
    obs, exp = observed[~impossible], expected[~impossible]
    order = np.argsort(exp, kind="stable")
    obs, exp = obs[order], exp[order]
    small = exp < min_expected
    cut = int(small.sum())
    if cut and exp[:cut].sum() < min_expected and cut < len(exp):
        cut += 1
    if cut > 1:
        obs = np.concatenate([[obs[:cut].sum()], obs[cut:]])
        exp = np.concatenate([[exp[:cut].sum()], exp[cut:]])
    dof = len(exp) - 1
    if dof < 1:
        return 0.0, 0, 1.0
    stat = float(np.sum((obs - exp) ** 2 / exp))
    return stat, dof, float(chi2.sf(stat, dof))


@dataclass
class SimReport:
    params: ModelParams
    occupancy: np.ndarray
    thinned_occupancy: np.ndarray
    transitions: np.ndarray
    thin: int
    moments: dict
    decay_analytic: float
    stationary: np.ndarray = field(repr=False)
    kernel: np.ndarray = field(repr=False)

    @property
    def samples(self):
        return int(self.occupancy.sum())

    def stationary_test(self):
        """Chi-square of the thinned occupancy against the stationary multinomial."""
        total = self.thinned_occupancy.sum()
        return chi_square(self.thinned_occupancy, total * self.stationary)

    def column_tests(self, min_visits=50):
        """Chi-square of next-state counts against each kernel column visited at least ``min_visits`` times."""
        out = []
        visits = self.transitions.sum(axis=0)
        for i, v in enumerate(visits):
            if v >= min_visits:
                out.append((i, int(v)) + chi_square(self.transitions[:, i], v * self.kernel[:, i]))
        return out

    def decay_estimate(self):
        """Largest eigenvalue of the lag-one regression matrix of the state vector."""
        m = self.moments
        c = m["count"]
        mx, my = m["sx"] / c, m["sy"] / c
        cxx = m["sxx"] / c - np.outer(mx, mx)
        cyx = m["syx"] / c - np.outer(my, mx)
        try:
            A = cyx @ np.linalg.inv(cxx)
        except np.linalg.LinAlgError:
            return math.nan
        return float(np.max(np.linalg.eigvals(A).real))

    def passed(self, significance=DEFAULT.significance):
        if self.stationary_test()[2] <= significance:
            return False
        return all(p > significance for *_, p in self.column_tests())

    def to_dict(self):
        stat, dof, p = self.stationary_test()
        return {
            "params": self.params.to_dict(),
            "samples": self.samples,
            "thin": self.thin,
            "occupancy": self.occupancy.tolist(),
            "thinned_occupancy": self.thinned_occupancy.tolist(),
            "transitions": self.transitions.tolist(),
            "stationary_chi2": {"statistic": stat, "dof": dof, "p_value": p},
            "column_chi2": [{"state": i, "visits": v, "statistic": s, "dof": d, "p_value": q}
                            for i, v, s, d, q in self.column_tests()],
            "decay_estimate": self.decay_estimate(),
            "decay_analytic": self.decay_analytic,
        }


def analytic_decay(sp, enumeration):
    """Largest ``prod (1 - omega_i)^{m_i}`` over nonzero degrees in the simplex."""
    vals = [sp.eigenvalue(m) for m in enumeration if any(m)]
    return max(vals) if vals else 0.0


def run(config, tol=DEFAULT):
    """Simulate ``config.chains`` chains for ``config.steps`` transitions each."""
    params = config.params
    n, N = params.n, params.N
    kern = build_kernel(params, tol)
    enum = kern.enumeration
    S = len(enum)
    radix = enum.radix
    lookup = enum.code_lookup
    sp = solve_spectral(params, tol)
    decay = analytic_decay(sp, enum)
    thin = config.thin
    if thin is None:
        # residual correlation between kept samples at most 1e-3
        thin = 1 if decay <= 0.0 else max(1, math.ceil(math.log(1e-3) / math.log(decay)))

    cdf = _inversion_tables(params)
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(config.seed)))
    C = config.chains
    state = np.tile(np.array(config.initial_state, dtype=np.int64), (C, 1))

    occupancy = np.zeros(S, dtype=np.int64)
    thinned = np.zeros(S, dtype=np.int64)
    transitions = np.zeros(S * S, dtype=np.int64)
    moments = {"count": 0, "sx": np.zeros(n), "sy": np.zeros(n),
               "sxx": np.zeros((n, n)), "syx": np.zeros((n, n))}

    t = 0
    while t < config.steps:
        B = min(BLOCK, config.steps - t)
        u = rng.random((B, C, 2 * n))
        path = np.empty((B + 1, C, n), dtype=np.int64)
        path[0] = state
        for b in range(B):
            cur = path[b]
            nxt = np.empty_like(cur)
            for r in range(n):
                nxt[:, r] = _draw(cdf[r], cur[:, r], u[b, :, r])
            left = N - nxt.sum(axis=1)
            for r in range(n):
                d = _draw(cdf[n + r], left, u[b, :, n + r])
                nxt[:, r] += d
                left -= d
            path[b + 1] = nxt
        state = path[-1]
        times = t + 1 + np.arange(B)
        keep = times > config.burn_in
        if keep.any():
            prev = path[:-1][keep]
            new = path[1:][keep]
            i_prev = lookup[prev @ radix]
            i_new = lookup[new @ radix]
            occupancy += np.bincount(i_new.ravel(), minlength=S)
            transitions += np.bincount((i_new * S + i_prev).ravel(), minlength=S * S)
            on_grid = (times[keep] - config.burn_in - 1) % thin == 0
            thinned += np.bincount(i_new[on_grid].ravel(), minlength=S)
            x = prev.reshape(-1, n).astype(float)
            y = new.reshape(-1, n).astype(float)
            moments["count"] += len(x)
            moments["sx"] += x.sum(axis=0)
            moments["sy"] += y.sum(axis=0)
            moments["sxx"] += x.T @ x
            moments["syx"] += y.T @ x
        t += B

    return SimReport(params, occupancy, thinned, transitions.reshape(S, S), thin, moments,
                     decay, kern.stationary, kern.matrix)


def merge_reports(reports):
    """Pool independent runs of the same model; counts and moments add."""
    first = reports[0]
    if any(r.params != first.params or r.thin != first.thin for r in reports):
        raise DomainError("can only merge runs of the same model and thinning")
    moments = {k: sum(r.moments[k] for r in reports) for k in first.moments}
    return SimReport(first.params,
                     sum(r.occupancy for r in reports),
                     sum(r.thinned_occupancy for r in reports),
                     sum(r.transitions for r in reports),
                     first.thin, moments, first.decay_analytic, first.stationary, first.kernel)
