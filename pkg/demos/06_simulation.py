# Simulate the dice and test against the exact kernel.
from cbtkraw import ModelParams, SimConfig, run

params = ModelParams(N=3, alpha=(0.3, 0.2), beta=(0.25, 0.35))
rep = run(SimConfig(params, steps=10_100, burn_in=100, seed=20111227, chains=100))

print(rep.samples, "transitions, thinning lag", rep.thin)
print("occupancy chi-square (stat, dof, p):", rep.stationary_test())
for state, visits, stat, dof, p in rep.column_tests():
    print(" column", state, visits, round(p, 3))
print("slowest decay: estimate", rep.decay_estimate(), "exact", rep.decay_analytic)
