# Polynomials with a prescribed norm ratio, and a series with r = 1 and |r| = tau.
from latticepoly import (OptimizerConfig, bohr_sandwich, construct_ratio_polynomial,
                         construct_small_regular_radius_series, estimate_bohr_m, estimate_regular_norm,
                         estimate_sup_norm, radii)

cfg = OptimizerConfig()

res = construct_ratio_polynomial(2.0, 3, 1 / 0.9, cfg)
print("degree 3 on l_2:", res.source, f"t = {res.t:.6f}", f"steps = {res.bisection_steps}")
s = estimate_sup_norm(res.P, cfg).value
r = estimate_regular_norm(res.P, cfg).value
print(f"||P|| = {s:.8f}  ||P||_r^(1/3) = {r ** (1 / 3):.8f}  target {1 / 0.9:.8f}")
for t, lam in res.trace:
    print(f"   t = {t:.6f}  lambda = {lam:.8f}")

# every term has ||P_m|| = 1 and ||P_m||_r^(1/m) = 1/tau
f = construct_small_regular_radius_series(2.0, 0.9, 10, cfg)
rep = radii(f, cfg)
print(f"\nseries on l_2^{f.space.dim}: r = {rep.r:.4f}, r_reg = {rep.r_reg:.4f}")
for m, a, b in rep.per_degree:
    print(f"  m = {m:2d}  ||P_m||^(1/m) = {a:.5f}  ||P_m||_r^(1/m) = {b:.5f}")

# the series terms themselves bound K_m from above on the ambient space
ks = {m: estimate_bohr_m(f.space, m, cfg, candidates=[f.terms[m]]).k_m for m in range(5, 11)}
lhs, rhs = bohr_sandwich(rep, ks, range(5, 11))
print(f"(min k_m) r = {lhs:.4f} <= r_reg = {rhs:.4f}")
