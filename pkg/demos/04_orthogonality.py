# Brute-force Gram matrices and which norm formula is right.
import numpy as np
from cbtkraw import ModelParams, SpectralParamSet, solve_spectral, gram_matrix, dual_gram_matrix, adjudicate_norm_formulas

sp = solve_spectral(ModelParams(N=6, alpha=(0.3, 0.2), beta=(0.25, 0.35)))
g = gram_matrix(sp, 6)
print("28x28 Gram: off-diagonal", g.max_offdiag, "diagonal vs closed form", g.max_diag_deviation)

d = dual_gram_matrix(sp, 6)
print("dual: off-diagonal", d.max_offdiag)
print("diag * weight ratio", d.extra["ratio_to_inverse_weight"][:3], "predicted", d.extra["predicted_ratio"])

# generic u is not orthogonal
rng = np.random.default_rng(5)
bad = SpectralParamSet.from_u(rng.uniform(-2, 2, (2, 2)), sp.eta)
print("random u:", gram_matrix(bad, 4).max_offdiag, gram_matrix(bad, 4).warning)

# norm candidates at one variable, eta = 1/3, N = 2
rep = adjudicate_norm_formulas(SpectralParamSet.from_u([[3.0]], [1 / 3]), 2)
for name in rep.candidates:
    print(f"{name:28s} {rep.candidates[name][1]:.6f}   brute force {rep.brute_force[1]:.6f}")
