"""Multi-indices, the state simplex and elementary probability weights.

A multi-index is an ordinary tuple of nonnegative ints. The state space of an
``n``-category chain with ``N`` dice is the simplex of multi-indices with
``sum(x) <= N``; :class:`SimplexEnumeration` fixes a linear order on it
(graded colexicographic) that every matrix in the package is indexed by.
"""

from __future__ import annotations

import math
from functools import cached_property

import numpy as np

from .errors import CapacityError, DomainError
from .tolerances import DEFAULT

# multinomial coefficients are handed to float64 code, so they must convert
MAX_EXACT = 2**1023


def as_multi_index(entries, cap=None):
    """Validate ``entries`` and return them as a tuple of ints."""
    out = tuple(int(e) for e in entries)
    if any(e != f for e, f in zip(out, entries)):
        raise DomainError(f"multi-index entries must be integers: {entries!r}")
    if any(e < 0 for e in out):
        raise DomainError(f"multi-index entries must be nonnegative: {out!r}")
    if cap is not None and sum(out) > cap:
        raise DomainError(f"multi-index {out!r} has sum {sum(out)} > {cap}")
    return out


def pochhammer(a, k):
    """Rising factorial ``a (a+1) ... (a+k-1)``; ``(a)_0 = 1``.

    For a nonpositive integer ``a`` with ``-a < k`` one factor is exactly zero,
    so the result is exactly ``0.0``.
    """
    if k < 0:
        raise DomainError("pochhammer length must be nonnegative")
    out = 1.0
    for j in range(k):
        out *= a + j
    return out


def multinomial_coefficient(N, parts):
    """Exact ``N! / (parts_1! ... parts_n! (N - sum(parts))!)`` as an int."""
    parts = as_multi_index(parts)
    rest = N - sum(parts)
    if N < 0 or rest < 0:
        raise DomainError(f"sum of parts {sum(parts)} exceeds N={N}")
    out = 1
    remaining = N
    for p in parts:
        out *= math.comb(remaining, p)
        remaining -= p
    if out > MAX_EXACT:
        raise OverflowError(f"multinomial coefficient for N={N} exceeds float64 range")
    return out


def binomial_pmf(k, n, p):
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"probability {p} outside [0, 1]")
    if k < 0 or k > n:
        return 0.0
    return math.comb(n, k) * p**k * (1.0 - p) ** (n - k)


def _check_prob_vector(eta):
    eta = np.asarray(eta, dtype=float)
    if eta.ndim != 1 or np.any(eta <= 0.0) or eta.sum() >= 1.0:
        raise DomainError(f"need eta_k > 0 and sum(eta) < 1, got {eta!r}")
    return eta


def multinomial_pmf(x, N, eta):
    """Multinomial law of ``N`` trials over ``n`` categories plus a remainder.

    ``x`` counts the first ``n`` categories; the remaining ``N - sum(x)`` trials
    fall in the implicit last category with probability ``1 - sum(eta)``.
    """
    eta = _check_prob_vector(eta)
    x = as_multi_index(x, N)
    if len(x) != len(eta):
        raise DomainError("x and eta differ in length")
    rest = 1.0 - math.fsum(eta)
    out = float(multinomial_coefficient(N, x))
    for xk, ek in zip(x, eta):
        out *= ek**xk
    return out * rest ** (N - sum(x))


class SimplexEnumeration:
    """All multi-indices of length ``n`` with sum at most ``N``.

    States are ordered by total, ties broken colexicographically (the last
    entry varies slowest), so for ``n=2, N=1`` the order is
    ``(0,0), (1,0), (0,1)``. Instances are immutable.
    """

    def __init__(self, n, N, states):
        self.n = n
        self.N = N
        self.states = tuple(states)
        self._index = {s: i for i, s in enumerate(self.states)}

    def __len__(self):
        return len(self.states)

    def __iter__(self):
        return iter(self.states)

    def __getitem__(self, i):
        return self.states[i]

    def __contains__(self, x):
        return tuple(x) in self._index

    def __repr__(self):
        return f"SimplexEnumeration(n={self.n}, N={self.N}, size={len(self)})"

    def index(self, x):
        try:
            return self._index[tuple(x)]
        except KeyError:
            raise DomainError(f"{x!r} is not in the simplex n={self.n}, N={self.N}") from None

    @cached_property
    def array(self):
        arr = np.array(self.states, dtype=np.int64).reshape(len(self), self.n)
        arr.setflags(write=False)
        return arr

    @cached_property
    def radix(self):
        return (self.N + 1) ** np.arange(self.n, dtype=np.int64)

    @cached_property
    def code_lookup(self):
        """Dense table from mixed-radix code ``sum x_r (N+1)^r`` to ordinal (-1 if absent)."""
        table = np.full((self.N + 1) ** self.n, -1, dtype=np.int64)
        table[self.array @ self.radix] = np.arange(len(self))
        table.setflags(write=False)
        return table

    def multinomial_weights(self, eta):
        """``multinomial_pmf(x, N, eta)`` for every state, as an array."""
        return np.array([multinomial_pmf(x, self.N, eta) for x in self.states])


def _compositions(n, total):
    # all length-n tuples of nonnegative ints summing to total
    if n == 1:
        yield (total,)
        return
    for last in range(total + 1):
        for head in _compositions(n - 1, total - last):
            yield head + (last,)


def enumerate_simplex(n, N, state_limit=None):
    if n < 1 or N < 0:
        raise DomainError(f"need n >= 1 and N >= 0, got n={n}, N={N}")
    limit = DEFAULT.state_limit if state_limit is None else state_limit
    size = math.comb(N + n, n)
    if size > limit:
        raise CapacityError(f"simplex n={n}, N={N} has {size} states > limit {limit}")
    states = []
    for total in range(N + 1):
        # _compositions varies the last entry slowest, which is colex order
        states.extend(_compositions(n, total))
    return SimplexEnumeration(n, N, states)
