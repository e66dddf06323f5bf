# From the dice probabilities to the polynomial parameters.
import numpy as np
from cbtkraw import ModelParams, solve_spectral, check_orthogonality_conditions, check_geometry

params = ModelParams(N=6, alpha=(0.3, 0.2), beta=(0.25, 0.35))
sp = solve_spectral(params)

print("D_n   ", sp.Dn)
print("eta   ", sp.eta)
print("u\n", sp.u)
print("eta_bar", sp.eta_bar, "sums", sp.eta.sum(), sp.eta_bar.sum())
print("1-omega", sp.eigen_factors)

# the same factors fall out of the mean-regression matrix diag(alpha) - beta alpha^T
a, b = np.array(params.alpha), np.array(params.beta)
print("check  ", np.sort(np.linalg.eigvals(np.diag(a) - np.outer(b, a)).real))

print(check_orthogonality_conditions(sp).residuals)
print("geometry", check_geometry(sp.u).max())

# n = 3 works the same way
sp3 = solve_spectral(ModelParams(N=4, alpha=(0.3, 0.2, 0.6), beta=(0.2, 0.3, 0.1)))
print(sp3.u)
