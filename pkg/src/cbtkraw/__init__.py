"""Cumulative Bernoulli trials and multivariable Krawtchouk polynomials."""

from .combinatorics import (
    SimplexEnumeration,
    as_multi_index,
    binomial_pmf,
    enumerate_simplex,
    multinomial_coefficient,
    multinomial_pmf,
    pochhammer,
)
from .errors import (
    CapacityError,
    CBTError,
    ComplexRootError,
    DegenerateError,
    DomainError,
    QuadratureError,
    SingularLinkError,
    SingularMatrixError,
    SolverError,
)
from .hypergeo import (
    check_euler_transform,
    check_pfaff_transform,
    eval_2f1_terminating,
    eval_f1n,
    eval_f1n_quadrature,
    f1n_series,
    polynomial_table,
)
from .kernel import (
    TransitionKernel,
    build_kernel,
    check_detailed_balance,
    eigen_check,
    reconstruct_kernel,
    spectral_reconstruct,
)
from .ortho import adjudicate_norm_formulas, check_generating_function, dual_gram_matrix, gram_matrix
from .params import (
    ModelParams,
    SpectralParamSet,
    check_geometry,
    check_orthogonality_conditions,
    compute_dual_eta,
    compute_eta,
    solve_spectral,
    solve_u_matrix,
)
from .sim import SimConfig, merge_reports, run, spawn_seeds, step
from .tolerances import DEFAULT, Tolerances

__version__ = "0.1.0"
