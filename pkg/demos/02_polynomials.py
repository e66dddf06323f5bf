# Multivariable Krawtchouk polynomials as terminating hypergeometric sums.
import numpy as np
from cbtkraw import (eval_f1n, eval_2f1_terminating, check_euler_transform,
                     check_pfaff_transform, eval_f1n_quadrature, f1n_series)

print(eval_f1n((1,), (1,), 2, [[1.5]]))           # 0.25
print(eval_2f1_terminating(1, -1, -2, 1.5))        # same thing, one variable

u = np.array([[0.7, -1.3], [2.2, 0.4]])
m, x, N = (2, 1), (1, 2), 5
print("P_m(x)        ", eval_f1n(m, x, N, u))
print("P_x(m) with u^T", eval_f1n(x, m, N, u.T))   # degree and argument swap

# transformations of the argument matrix
print("u -> 1-u residual", check_euler_transform((1, 1), (1, 2), N, u))
print("Pfaff residual   ", check_pfaff_transform(m, x, N, u))

# integral representation against a truncated series (small u, non-integer b)
a, b, c = [0.7, 1.3], [0.4, -1.2], 3.9
uu = np.array([[0.08, -0.05], [0.03, 0.09]])
print(eval_f1n_quadrature(a, b, c, uu), f1n_series(a, b, c, uu, max_total=30))
