# Homogeneous Bohr radii K_m of small l_p^n balls, estimated by nested search.
#
# K_m = chi^(-1/m) where chi is the largest ratio ||P||_r / ||P|| over degree-m
# polynomials. Any polynomial gives a lower bound on chi, so the search gives
# upper bounds on K_m.
from latticepoly import INF, OptimizerConfig, bohr_grid, disc_bohr_threshold, estimate_bohr_m, SpaceSpec

cfg = OptimizerConfig(starts=32)

est = estimate_bohr_m(SpaceSpec(2, 1), 2, cfg)
print(f"l_1^2, m=2: ratio {est.ratio_sup:.6f}, k_2 <= {est.k_m:.6f}")
print("witness:", est.witness_poly)

# carrying witnesses from n to n+1 keeps each column non-increasing in n
print("\n   p  n  m      k_m")
for e in bohr_grid([1.0, 2.0, INF], [1, 2, 3], [2], cfg, batch=60, polish=4, rounds=5):
    row = e.csv_row()
    print(f"{str(row['p']):>4} {row['n']:2d} {row['m']:2d}  {row['k_m']:.5f}")

# one variable: Bohr's 1/3 through the extremal Moebius maps (a - z)/(1 - a z)
print()
for a in (0.5, 0.9, 0.99, 0.999):
    print(f"a = {a:<6} sum |c_k| r^k = 1 at r = {disc_bohr_threshold(a):.6f}")
