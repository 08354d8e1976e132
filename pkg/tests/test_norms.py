import math

import numpy as np
import pytest

from latticepoly import (INF, HomogeneousPolynomial, NonConvergenceError, OptimizerConfig, SpaceSpec,
                         derivative_poly, estimate_real_sup_norm, estimate_regular_norm, estimate_sup_norm, evaluate,
                         evaluate_modulus, gradient_regular_norm, holder_check, p_norm, random_polynomial,
                         regular_norm_bounds_l1, regular_norms, sup_norms)
from latticepoly.poly import poly_modulus

SQRT3 = math.sqrt(3.0)
L12 = SpaceSpec(2, 1)
PS = [1.0, 1.5, 2.0, 3.0, INF]


def test_example_sup_and_regular(example_poly, cfg):
    s = estimate_sup_norm(example_poly, cfg)
    r = estimate_regular_norm(example_poly, cfg)
    assert s.value == pytest.approx(1.0, abs=1e-6)
    assert r.value == pytest.approx((3 + SQRT3) / 4, abs=1e-6)


def test_4xy_on_l1(cfg):
    P = HomogeneousPolynomial(L12, 2, {(1, 1): 4})
    assert estimate_sup_norm(P, cfg).value == pytest.approx(1.0, abs=1e-6)


@pytest.mark.parametrize("p", PS)
@pytest.mark.parametrize("n, m", [(1, 3), (2, 1), (3, 4)])
def test_single_power_has_norm_one(p, n, m, cfg):
    P = HomogeneousPolynomial(SpaceSpec(n, p), m, {(m,) + (0,) * (n - 1): 1})
    assert estimate_sup_norm(P, cfg).value == pytest.approx(1.0, abs=1e-9)
    assert estimate_regular_norm(P, cfg).value == pytest.approx(1.0, abs=1e-9)


@pytest.mark.parametrize("p", PS)
def test_estimate_invariants(p, cfg):
    rng = np.random.default_rng(7)
    sp = SpaceSpec(3, p)
    for m in (1, 2, 3):
        P = random_polynomial(sp, m, rng)
        s = estimate_sup_norm(P, cfg)
        r = estimate_regular_norm(P, cfg)
        assert abs(abs(evaluate(P, s.witness)) - s.value) <= 1e-9
        assert abs(evaluate_modulus(P, r.witness) - r.value) <= 1e-9
        assert p_norm(sp, s.witness) == pytest.approx(1.0, abs=1e-10)
        assert p_norm(sp, r.witness) == pytest.approx(1.0, abs=1e-10)
        assert np.all(np.isreal(r.witness)) and np.all(np.real(r.witness) >= 0)
        assert s.value <= r.value + 1e-8
        assert s.starts == cfg.starts and s.seed == cfg.seed and s.spread >= 0


def test_deterministic_given_seed(example_poly):
    a = estimate_sup_norm(example_poly, OptimizerConfig(seed=5, starts=8))
    b = estimate_sup_norm(example_poly, OptimizerConfig(seed=5, starts=8))
    assert a.value == b.value and np.array_equal(a.witness, b.witness)


def test_exact_regular_norm_on_linf():
    P = HomogeneousPolynomial(SpaceSpec(3, INF), 3, {(1, 1, 1): -2j, (3, 0, 0): 1.5, (0, 1, 2): 0.25})
    r = estimate_regular_norm(P)
    assert r.exact and r.value == pytest.approx(3.75, rel=1e-15)


def test_batched_estimates_match_single(rng, cfg):
    polys = [random_polynomial(SpaceSpec(2, 2), 3, rng) for _ in range(4)]
    batch = sup_norms(polys, cfg)
    regs = regular_norms(polys, cfg)
    for P, s, r in zip(polys, batch, regs):
        assert s.value == pytest.approx(estimate_sup_norm(P, cfg).value, abs=1e-8)
        assert r.value == pytest.approx(estimate_regular_norm(P, cfg).value, abs=1e-8)


def test_degree_zero_rejected():
    with pytest.raises(ValueError):
        estimate_sup_norm(HomogeneousPolynomial(L12, 0, {(0, 0): 1}))


def test_nonconvergence_reported():
    P = HomogeneousPolynomial(SpaceSpec(3, 2), 3, {(1, 1, 1): 1, (2, 1, 0): 0.3j, (0, 2, 1): -0.7})
    with pytest.raises(NonConvergenceError) as info:
        estimate_sup_norm(P, OptimizerConfig(max_iter=1, starts=4))
    assert info.value.estimate is not None and info.value.estimate.value > 0


def test_config_json_roundtrip():
    c = OptimizerConfig(starts=9, seed=3, tol=1e-8, max_iter=77)
    assert OptimizerConfig.from_json(c.to_json()) == c
    with pytest.raises(ValueError):
        OptimizerConfig(starts=0)


# l_1 closed forms

def test_l1_bracket_examples(cfg):
    P = HomogeneousPolynomial(L12, 2, {(1, 1): 1})
    assert regular_norm_bounds_l1(P) == pytest.approx((0.25, 0.25))
    assert estimate_regular_norm(P, cfg).value == pytest.approx(0.25, abs=1e-8)
    Q = HomogeneousPolynomial(L12, 2, {(2, 0): 1, (1, 1): 4})
    lo, hi = regular_norm_bounds_l1(Q)
    assert (lo, hi) == pytest.approx((1.0, 2.0))
    # 4t - 3t^2 on [0, 1] peaks at t = 2/3
    assert estimate_regular_norm(Q, cfg).value == pytest.approx(4 / 3, abs=1e-8)
    for m in (1, 4):
        R = HomogeneousPolynomial(SpaceSpec(3, 1), m, {(m, 0, 0): 1})
        assert regular_norm_bounds_l1(R) == (1.0, 1.0)


def test_l1_bracket_wrong_space():
    with pytest.raises(ValueError):
        regular_norm_bounds_l1(HomogeneousPolynomial(SpaceSpec(2, 2), 2, {(1, 1): 1}))


def test_gradient_regular_norm_example(cfg):
    P = HomogeneousPolynomial(L12, 2, {(1, 1): 1})
    assert gradient_regular_norm(P, cfg) == pytest.approx(0.5, abs=1e-6)


def test_l1_matos_bound_and_bracket(cfg):
    rng = np.random.default_rng(3)
    small = cfg.with_(starts=32)
    for n in (2, 3, 4):
        for m in (1, 2, 3, 4):
            P = random_polynomial(SpaceSpec(n, 1), m, rng)
            s, r = estimate_sup_norm(P, small).value, estimate_regular_norm(P, small).value
            lo, hi = regular_norm_bounds_l1(P)
            assert s <= r + 1e-8
            assert r <= math.e**m * s + 1e-6
            assert lo - 1e-12 <= r <= hi + 1e-8


# holder

@pytest.mark.parametrize("terms, x, y, theta, lhs, rhs", [
    ({(1, 1): 4}, [2, 1], [1, 2], 0.5, 8, 8),
    ({(1, 1): 4}, [1, 1], [1, 0], 0.5, 0, 0),
    ({(2,): 1}, [2], [1], 0.5, 2, 2),
])
def test_holder_examples(terms, x, y, theta, lhs, rhs):
    P = HomogeneousPolynomial(SpaceSpec(len(x), 1), 2, terms)
    got = holder_check(P, x, y, theta)
    assert got[0] == pytest.approx(lhs, rel=1e-14) and got[1] == pytest.approx(rhs, rel=1e-14) and got[2]


def test_holder_preconditions():
    P = HomogeneousPolynomial(L12, 2, {(1, 1): -1})
    with pytest.raises(ValueError):
        holder_check(P, [1, 1], [1, 1], 0.5)
    Q = poly_modulus(P)
    with pytest.raises(ValueError):
        holder_check(Q, [-1, 1], [1, 1], 0.5)
    with pytest.raises(ValueError):
        holder_check(Q, [1, 1], [1, 1], 1.0)


def test_holder_random():
    rng = np.random.default_rng(11)
    for _ in range(500):
        n = int(rng.integers(1, 5))
        P = random_polynomial(SpaceSpec(n, 2), int(rng.integers(1, 5)), rng, positive=True)
        assert holder_check(P, rng.random(n) * 3, rng.random(n) * 3, float(rng.uniform(0.01, 0.99)))[2]


# complexification

def test_real_polynomial_regular_witness_and_sup_bound(cfg):
    rng = np.random.default_rng(5)
    for p in (1.0, 2.0, INF):
        for m in (2, 3):
            P = random_polynomial(SpaceSpec(2, p), m, rng, real=True)
            r = estimate_regular_norm(P, cfg)
            assert np.all(np.imag(r.witness) == 0) and np.all(np.real(r.witness) >= 0)
            s, rs = estimate_sup_norm(P, cfg).value, estimate_real_sup_norm(P, cfg).value
            assert rs <= s + 1e-8
            assert s <= 2 ** (m - 1) * rs + 1e-6


def test_real_sup_of_x2_minus_y2_on_linf(cfg):
    P = HomogeneousPolynomial(SpaceSpec(2, INF), 2, {(2, 0): 1, (0, 2): -1})
    assert estimate_real_sup_norm(P, cfg).value == pytest.approx(1.0, abs=1e-9)
    assert estimate_sup_norm(P, cfg).value == pytest.approx(2.0, abs=1e-9)


def test_real_sup_rejects_complex():
    with pytest.raises(ValueError):
        estimate_real_sup_norm(HomogeneousPolynomial(L12, 2, {(1, 1): 1j}))


def test_derivative_holomorphy_type_bound(cfg):
    rng = np.random.default_rng(19)
    small = cfg.with_(starts=16)
    for _ in range(12):
        p = (1.0, 2.0, INF)[int(rng.integers(3))]
        sp = SpaceSpec(int(rng.integers(1, 4)), p)
        m = int(rng.integers(1, 5))
        P = random_polynomial(sp, m, rng)
        a = rng.standard_normal(sp.dim) + 1j * rng.standard_normal(sp.dim)
        k = int(rng.integers(1, m + 1))
        d = derivative_poly(P, k, a)
        if d.is_zero():
            continue
        lhs = estimate_regular_norm(d, small).value
        rhs = (2 * math.e) ** m * estimate_regular_norm(P, small).value * p_norm(sp, a) ** (m - k)
        assert lhs <= rhs + 1e-6
