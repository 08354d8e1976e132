"""Property suites behind ``lattice-poly verify``.

Each check returns ``(name, passed, detail)``. Sizes are modest so the full
set runs in well under a minute.
"""
from __future__ import annotations

import math

import numpy as np

from .bohr import disc_bohr_threshold, estimate_bohr_m
from .lattice import INF, SpaceSpec
from .norms import (OptimizerConfig, estimate_regular_norm, estimate_sup_norm, holder_check, regular_norm_bounds_l1,
                    regular_norms, sup_norms)
from .ortho import exact_regular_norm, oa_norm_pair, oa_real_ratio, random_diagonal
from .poly import HomogeneousPolynomial, evaluate, evaluate_modulus, random_polynomial
from .series import coherence_demo, geometric_series, log_convexity_probe, regular_converges_at


def _rand_space(rng, n_max=4, ps=(1.0, 2.0, INF)):
    return SpaceSpec(int(rng.integers(1, n_max + 1)), ps[int(rng.integers(len(ps)))])


def suite_norms(cfg: OptimizerConfig, seed: int = 0):
    rng = np.random.default_rng(seed)
    out = []
    bad = 0
    for _ in range(2000):
        sp = _rand_space(rng)
        P = random_polynomial(sp, int(rng.integers(1, 5)), rng)
        z = rng.standard_normal(sp.dim) + 1j * rng.standard_normal(sp.dim)
        lhs, rhs = abs(evaluate(P, z)), evaluate_modulus(P, z)
        bad += lhs > rhs + 1e-10 * max(1.0, rhs)
    out.append(("modulus inequality |P(z)| <= |P|(|z|)", bad == 0, f"{bad} violations in 2000"))
    bad = 0
    for _ in range(2000):
        sp = _rand_space(rng)
        P = random_polynomial(sp, int(rng.integers(1, 5)), rng, positive=True)
        x, y = rng.random(sp.dim) * 2, rng.random(sp.dim) * 2
        bad += not holder_check(P, x, y, float(rng.uniform(0.05, 0.95)))[2]
    out.append(("Holder inequality for positive polynomials", bad == 0, f"{bad} violations in 2000"))
    sp = SpaceSpec(2, 1)
    P = HomogeneousPolynomial(sp, 2, {(2, 0): 0.5, (0, 2): -0.5, (1, 1): 2 + math.sqrt(3)})
    s, r = estimate_sup_norm(P, cfg).value, estimate_regular_norm(P, cfg).value
    ok = abs(s - 1) < 1e-6 and abs(r - (3 + math.sqrt(3)) / 4) < 1e-6
    out.append(("example on l_1^2: ||P|| = 1, ||P||_r = (3+sqrt3)/4", ok, f"sup={s:.12f} reg={r:.12f}"))
    bad = 0
    small = cfg.with_(starts=16)
    for m in range(1, 5):
        polys = [random_polynomial(SpaceSpec(3, 1), m, rng) for _ in range(25)]
        sups = sup_norms(polys, small)
        regs = regular_norms(polys, small)
        for P, s, r in zip(polys, sups, regs):
            lo, hi = regular_norm_bounds_l1(P)
            bad += not (s.value <= r.value + 1e-8 and r.value <= math.e**m * s.value + 1e-6
                        and lo - 1e-9 <= r.value <= hi + 1e-9)
    out.append(("l_1: ||P|| <= ||P||_r <= e^m ||P|| and the closed-form bracket", bad == 0, f"{bad} violations in 100"))
    return out


def suite_bohr(cfg: OptimizerConfig, seed: int = 0):
    out = []
    est = estimate_bohr_m(SpaceSpec(2, 1), 2, cfg.with_(seed=seed))
    target = (3 + math.sqrt(3)) / 4
    out.append(("K_2(l_1^2) search beats the (3+sqrt3)/4 witness", est.ratio_sup >= target - 1e-4,
                f"ratio_sup={est.ratio_sup:.6f} k_2={est.k_m:.6f}"))
    ks = [estimate_bohr_m(SpaceSpec(2, p), 1, cfg.with_(seed=seed), batch=40, polish=2, rounds=3).k_m
          for p in (1.0, 2.0, INF)]
    out.append(("k_1 = 1 on l_p^2", all(abs(k - 1) < 1e-6 for k in ks), f"k_1={ks}"))
    r = disc_bohr_threshold(0.999)
    out.append(("disc threshold tends to 1/3", 1 / 3 < r < 0.3337, f"r(0.999)={r:.8f}"))
    rs = [disc_bohr_threshold(a) for a in np.linspace(0.05, 0.95, 19)]
    out.append(("disc threshold decreasing, above 1/3", all(b < a for a, b in zip(rs, rs[1:])) and min(rs) > 1 / 3,
                f"min={min(rs):.6f}"))
    return out


def suite_series(cfg: OptimizerConfig, seed: int = 0):
    out = []
    a, b = coherence_demo()
    out.append(("coherence demo values", abs(a - (0.8 + 0.4j)) < 1e-12 and abs(b - 2 / math.sqrt(5)) < 1e-12,
                f"|f|_0(i/2)={a}, |f|_(i/2)(i/2)={b}"))
    f = geometric_series(SpaceSpec(2, 1), 60)
    res = regular_converges_at(f, [0.5, 0.5j])
    out.append(("geometric series converges at |z_j| = 1/2 to 2^n", res.converges is True
                and abs(res.partial_sums[-1] - 4) < 1e-6, f"S_60={float(res.partial_sums[-1]):.12f}"))
    res = regular_converges_at(f, [1.0, 0.5])
    out.append(("geometric series diverges when some |z_j| = 1", res.converges is False, f"verdict={res.converges}"))
    rep = log_convexity_probe(geometric_series(SpaceSpec(2, 1), 40), 30, seed=seed)
    out.append(("domain of regular convergence is solid and log-convex",
                rep.violations == 0 and rep.solidity_violations == 0,
                f"{rep.checks} checks, {rep.violations} violations, {rep.inconclusive} inconclusive"))
    return out


def suite_ortho(cfg: OptimizerConfig, seed: int = 0):
    rng = np.random.default_rng(seed)
    out = []
    bad = 0
    small = cfg.with_(starts=16)
    for _ in range(60):
        sp = SpaceSpec(int(rng.integers(1, 7)), (1.0, 2.0, INF)[int(rng.integers(3))])
        P = random_diagonal(sp, int(rng.integers(1, 7)), rng)
        sup, reg = oa_norm_pair(P, small)
        exact, _ = exact_regular_norm(P)
        bad += not (abs(sup.value - reg.value) <= 1e-6 * reg.value and abs(reg.value - exact) <= 1e-6 * exact
                    and abs(sup.extra["rotation_value"] - exact) <= 1e-10 * exact)
    out.append(("orthogonally additive: ||P|| = ||P||_r", bad == 0, f"{bad} violations in 60"))
    ratios = [oa_real_ratio(m, cfg) for m in (2, 4, 6)]
    out.append(("real even sharpness example has ratio 2", all(r == 2.0 for r in ratios), f"ratios={ratios}"))
    return out


SUITES = {"norms": suite_norms, "bohr": suite_bohr, "series": suite_series, "ortho": suite_ortho}


def run_suites(names, cfg: OptimizerConfig | None = None, seed: int = 0):
    cfg = cfg or OptimizerConfig()
    if "all" in names:
        names = list(SUITES)
    results = []
    for name in names:
        for check in SUITES[name](cfg, seed):
            results.append((name, check[0], bool(check[1]), check[2]))
    return results


