# Radii of convergence and regular convergence of power series.
import math

import numpy as np

from latticepoly import (OptimizerConfig, PowerSeries, SpaceSpec, coherence_demo, estimate_sup_norm,
                         geometric_series, log_convexity_probe, radii, random_polynomial, regular_converges_at)

# the full monomial expansion sum_alpha z^alpha converges absolutely iff
# |z_j| < 1 for every j; at z_j = 1/2 its value is 2^n
f = geometric_series(SpaceSpec(2, 1), 60)
for z in ([0.5, 0.5j], [0.9, 0.3], [1.0, 0.2]):
    res = regular_converges_at(f, z)
    print(f"z = {z}: converges={res.converges}, S_60 = {res.partial_sums[-1]:.6f}")

# normalized random terms: both radii are 1 up to the tail-window resolution
cfg = OptimizerConfig(starts=32)
rng = np.random.default_rng(0)
space = SpaceSpec(2, 2)
terms = []
for m in range(1, 17):
    P = random_polynomial(space, m, rng)
    terms.append(P / estimate_sup_norm(P, cfg).value)
rep = radii(PowerSeries.from_terms(space, terms), cfg)
print(f"\nrandom series on {space}: r = {rep.r:.4f}, r_reg = {rep.r_reg:.4f}, window {rep.window}")
print(rep.to_csv())

# solid and log-convex domain of regular convergence, checked by sampling
probe = log_convexity_probe(geometric_series(SpaceSpec(2, 1), 40), 25, seed=1)
print("log-convexity probe:", probe.checks, "checks,", probe.violations, "violations")

# 1/(1 - z): the modulus expansions about 0 and about i/2 disagree at i/2
a, b = coherence_demo()
print(f"|f|_0(i/2) = {a:.6f}   |f|_(i/2)(i/2) = {b:.6f}   2/sqrt5 = {2 / math.sqrt(5):.6f}")
