# Sup norm versus regular norm for a quadratic on the unit ball of l_1^2.
import math

import numpy as np

from latticepoly import (HomogeneousPolynomial, OptimizerConfig, SpaceSpec, estimate_regular_norm,
                         estimate_sup_norm, poly_modulus, regular_norm_bounds_l1)

space = SpaceSpec(2, 1)
P = HomogeneousPolynomial(space, 2, {(2, 0): 0.5, (0, 2): -0.5, (1, 1): 2 + math.sqrt(3)})
print(P)
print("modulus:", poly_modulus(P))

cfg = OptimizerConfig(starts=64, seed=0)
sup = estimate_sup_norm(P, cfg)
reg = estimate_regular_norm(P, cfg)
print(f"||P||   = {sup.value:.12f}  at z = {np.round(sup.witness, 6)}")
print(f"||P||_r = {reg.value:.12f}  at x = {np.round(reg.witness.real, 6)}")
print(f"(3 + sqrt 3)/4 = {(3 + math.sqrt(3)) / 4:.12f}")

# on l_1 single monomials have closed-form norms alpha^alpha / m^m,
# which bracket the regular norm of any sum
lo, hi = regular_norm_bounds_l1(P)
print(f"closed-form bracket: {lo:.6f} <= ||P||_r <= {hi:.6f}")

# the multistart spread shows how much the local optima disagree
print("converged starts:", sup.converged, "of", sup.starts, " spread:", f"{sup.spread:.2e}")
