# Orthogonally additive (diagonal) polynomials: sup norm equals regular norm.
import numpy as np

from latticepoly import (INF, DiagonalPolynomial, OptimizerConfig, SpaceSpec, exact_regular_norm, oa_norm_pair,
                         oa_real_ratio, random_diagonal, rotation_witness)

cfg = OptimizerConfig(starts=32)
P = DiagonalPolynomial(SpaceSpec(2, INF), 2, [1, -1])
sup, reg = oa_norm_pair(P, cfg)
print(f"z1^2 - z2^2 on l_inf^2: ||P|| = {sup.value:.6f}, ||P||_r = {reg.value:.6f}")
print("rotated witness:", np.round(sup.extra["rotation_witness"], 6))

# rotating each coordinate by exp(-i arg(c_k)/m) turns the regular maximizer
# into a sup maximizer, so the two norms agree for every p
rng = np.random.default_rng(3)
for p in (1.0, 2.0, 3.0, INF):
    D = random_diagonal(SpaceSpec(4, p), 3, rng)
    exact, x = exact_regular_norm(D)
    z = rotation_witness(D, x)
    s, r = oa_norm_pair(D, cfg)
    print(f"p = {p}: closed form {exact:.8f}  |P(z_rot)| = {abs(D(z)):.8f}  optimizer {s.value:.8f} / {r.value:.8f}")

# over the reals the equality fails for even degree: x1^m - x2^m has ratio 2
for m in (2, 4, 6):
    print(f"real ratio for m = {m}: {oa_real_ratio(m, cfg)}")
