"""Every numeric tolerance used by the checks, gathered in one record.

Override individual values with ``dataclasses.replace(DEFAULT, eigen=1e-12)``
or, from the command line, ``--tol eigen=1e-12``.
"""

from dataclasses import dataclass, fields, replace


@dataclass(frozen=True)
class Tolerances:
    # stationary-law identities for eta and D_n
    eta_identity: float = 1e-12
    # u-matrix solver
    newton_residual: float = 1e-12
    imag_root: float = 1e-9
    root_separation: float = 1e-8
    link_equation: float = 1e-10
    max_condition: float = 1e12
    # parameter web
    necessary: float = 1e-10
    cross: float = 1e-9
    condition_report: float = 1e-9
    geometry: float = 1e-9
    dual_sum: float = 1e-10
    # kernel
    stochastic: float = 1e-12
    balance: float = 1e-12
    stationary: float = 1e-11
    eigen: float = 1e-9
    reconstruct: float = 1e-8
    # gram / orthogonality
    gram_offdiag: float = 1e-9
    gram_offdiag_n3: float = 1e-8
    gram_diag: float = 1e-9
    gram_symmetry: float = 1e-12
    generating_function: float = 1e-10
    adjudicate_n1: float = 1e-12
    # hypergeometric identities
    transform: float = 1e-10
    quadrature: float = 1e-6
    n1_agreement: float = 1e-13
    # closed forms at n = 1
    closed_form: float = 1e-12
    # simulation
    significance: float = 1e-3
    # enumeration size limit
    state_limit: int = 200_000


DEFAULT = Tolerances()


def names():
    return [f.name for f in fields(Tolerances)]


def with_overrides(base, overrides):
    """Return ``base`` with ``{name: value}`` overrides applied.

    Unknown names raise ``KeyError`` so typos on the command line are loud.
    """
    known = set(names())
    for key in overrides:
        if key not in known:
            raise KeyError(f"unknown tolerance {key!r}")
    cast = {k: (int(v) if k == "state_limit" else float(v)) for k, v in overrides.items()}
    return replace(base, **cast)
