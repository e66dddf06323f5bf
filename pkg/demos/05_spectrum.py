# The polynomials times the stationary law are eigenvectors of the kernel.
import numpy as np
from cbtkraw import ModelParams, solve_spectral, build_kernel, eigen_check, gram_matrix, polynomial_table, spectral_reconstruct

params = ModelParams(N=6, alpha=(0.3, 0.2), beta=(0.25, 0.35))
sp = solve_spectral(params)
kern = build_kernel(params)
table = polynomial_table(sp.u, kern.enumeration)

rep = eigen_check(kern, sp, table)
for m, lam, r in list(zip(rep.degrees, rep.eigenvalues, rep.residuals))[:6]:
    print(m, round(lam, 6), r)
print("worst residual over all 28:", rep.max_residual)

# numpy agrees on the spectrum
print(np.allclose(np.sort(rep.eigenvalues), np.sort(np.linalg.eigvals(kern.matrix).real)))

norms = gram_matrix(sp, params.N, table).diagonal
print("rebuild K from eigenpairs, max error", spectral_reconstruct(kern, sp, norms, table))
