# The dice game as a Markov chain: keep first-roll successes, reroll the rest.
import numpy as np
from cbtkraw import ModelParams, build_kernel, check_detailed_balance, step

params = ModelParams(N=3, alpha=(0.3, 0.2), beta=(0.25, 0.35))
kern = build_kernel(params)

print("states:", list(kern.enumeration))
np.set_printoptions(precision=4, suppress=True)
print(kern.matrix)  # column i = law of the next state given state i

print("column sums off by", kern.column_sum_residual())
print("stationary law:", kern.stationary)
print("detailed balance residual", check_detailed_balance(kern))

# a short trajectory
rng = np.random.default_rng(0)
x = (0, 0)
for t in range(8):
    x = step(x, params, rng)
    print(t, x)
