import math

import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from latticepoly import (INF, HomogeneousPolynomial, SpaceSpec, complexification_formula, complexify,
                         count_multiindices, derivative_poly, enumerate_multiindices, evaluate, evaluate_modulus,
                         is_orthogonally_additive, modulus_point, partial_derivative, poly_modulus,
                         polynomial_from_json, polynomial_to_json, random_polynomial, real_imag_parts, symmetric_form)

SQRT3 = math.sqrt(3.0)
L12 = SpaceSpec(2, 1)


def poly(terms, n=2, m=None, p=1):
    m = m if m is not None else sum(next(iter(terms)))
    return HomogeneousPolynomial(SpaceSpec(n, p), m, terms)


@st.composite
def polys(draw, real=False, positive=False, n_max=4, m_max=4):
    n = draw(st.integers(1, n_max))
    m = draw(st.integers(0, m_max))
    seed = draw(st.integers(0, 2**32 - 1))
    p = draw(st.sampled_from([1.0, 2.0, INF]))
    return random_polynomial(SpaceSpec(n, p), m, np.random.default_rng(seed), real=real, positive=positive,
                             density=draw(st.floats(0.2, 1.0)))


def points(n, seed):
    r = np.random.default_rng(seed)
    return r.standard_normal(n) + 1j * r.standard_normal(n)


# enumeration

@pytest.mark.parametrize("n, m, expected", [
    (2, 2, [(2, 0), (1, 1), (0, 2)]),
    (3, 1, [(1, 0, 0), (0, 1, 0), (0, 0, 1)]),
])
def test_enumerate_examples(n, m, expected):
    assert enumerate_multiindices(n, m) == expected


def test_enumerate_count_6_6():
    alphas = enumerate_multiindices(6, 6)
    assert len(alphas) == 462 == math.comb(11, 5)
    assert len(set(alphas)) == 462 and all(sum(a) == 6 for a in alphas)


@pytest.mark.parametrize("n, m", [(1, 0), (1, 5), (3, 4), (5, 3)])
def test_enumerate_count_and_order(n, m):
    alphas = enumerate_multiindices(n, m)
    assert len(alphas) == count_multiindices(n, m) == math.comb(m + n - 1, n - 1)
    assert alphas == sorted(alphas, reverse=True)


def test_enumerate_cap():
    with pytest.raises(OverflowError):
        enumerate_multiindices(20, 20)
    with pytest.raises(OverflowError):
        enumerate_multiindices(4, 4, cap=10)


# construction invariants

def test_zero_coefficients_purged_and_order_canonical():
    P = poly({(0, 2): 1.0, (1, 1): 0.0, (2, 0): 3.0})
    assert list(P.terms) == [(2, 0), (0, 2)]


def test_rejects_wrong_degree_and_length():
    with pytest.raises(ValueError):
        poly({(2, 0): 1, (1, 0): 1}, m=2)
    with pytest.raises(ValueError):
        HomogeneousPolynomial(L12, 2, {(2, 0, 0): 1})
    with pytest.raises(ValueError):
        HomogeneousPolynomial(L12, 2, {(3, -1): 1})


# evaluation

@pytest.mark.parametrize("P, z, expected", [
    (poly({(1, 1): 4}), [0.5, 0.5], 1),
    (poly({(2, 0): 0.5, (0, 2): -0.5, (1, 1): 2 + SQRT3}), [1, 0], 0.5),
    (poly({(2,): 1}, n=1), [1j], -1),
])
def test_evaluate_examples(P, z, expected):
    assert evaluate(P, z) == pytest.approx(expected, abs=1e-15)


def test_evaluate_dimension_mismatch():
    with pytest.raises(ValueError):
        evaluate(poly({(1, 1): 1}), [1, 2, 3])


@given(polys(), st.integers(0, 10**6), st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False))
@settings(max_examples=100, deadline=None)
def test_homogeneity(P, seed, lam):
    z = points(P.dim, seed)
    lhs = evaluate(P, lam * z)
    rhs = lam**P.degree * evaluate(P, z)
    assert abs(lhs - rhs) <= 1e-10 * max(1.0, abs(rhs), evaluate_modulus(P, abs(lam) * abs(z)))


def test_batched_evaluation_matches_pointwise(rng):
    P = random_polynomial(SpaceSpec(3, 2), 4, rng)
    Z = rng.standard_normal((7, 3)) + 1j * rng.standard_normal((7, 3))
    np.testing.assert_allclose(evaluate(P, Z), [evaluate(P, z) for z in Z], rtol=1e-13)


# modulus

def test_modulus_examples():
    P = poly({(2, 0): 0.5, (0, 2): -0.5, (1, 1): 2 + SQRT3})
    assert poly_modulus(P) == poly({(2, 0): 0.5, (0, 2): 0.5, (1, 1): 2 + SQRT3})
    Q = poly({(1, 1): 1})
    assert poly_modulus(Q) == Q
    R = poly_modulus(poly({(2, 0): 1 - 1j}))
    assert R.terms[(2, 0)] == pytest.approx(math.sqrt(2), rel=1e-15)


@given(polys(), st.floats(0.01, 100))
def test_modulus_idempotent_and_homogeneous(P, s):
    M = poly_modulus(P)
    assert poly_modulus(M) == M
    Ms = poly_modulus(P * s)
    for a, c in M.terms.items():
        assert Ms.terms[a] == pytest.approx(s * c, rel=1e-14)


@given(polys(), st.integers(0, 10**6))
@settings(max_examples=200)
def test_modulus_inequality(P, seed):
    z = points(P.dim, seed)
    rhs = float(np.real(evaluate(poly_modulus(P), modulus_point(z))))
    assert abs(evaluate(P, z)) <= rhs + 1e-10 * max(1.0, rhs)


# real and imaginary parts, complexification

def test_real_imag_examples():
    one = SpaceSpec(1, 2)
    P0, P1 = real_imag_parts(HomogeneousPolynomial(one, 2, {(2,): 1}))
    assert P0 == HomogeneousPolynomial(one, 2, {(2,): 1}) and P1.is_zero()
    P0, P1 = real_imag_parts(poly({(1, 1): 2 + 3j}))
    assert P0 == poly({(1, 1): 2}) and P1 == poly({(1, 1): 3})
    P0, P1 = real_imag_parts(HomogeneousPolynomial(one, 5, {(5,): 1j}))
    assert P0.is_zero() and P1 == HomogeneousPolynomial(one, 5, {(5,): 1})


@given(polys())
def test_real_imag_reconstruct(P):
    P0, P1 = real_imag_parts(P)
    assert P0.is_real() and P1.is_real()
    for a, c in P.terms.items():
        assert complex(P0.terms.get(a, 0), P1.terms.get(a, 0)) == c


def test_complexify_examples():
    t2 = HomogeneousPolynomial(SpaceSpec(1, 2), 2, {(2,): 1})
    assert evaluate(complexify(t2), [1j]) == pytest.approx(-1)
    assert evaluate(complexify(poly({(1, 1): 1})), [1j, 1j]) == pytest.approx(-1)
    # A(x, x) - A(y, y) + 2i A(x, y) with x = y = 1
    assert evaluate(complexify(t2), [1 + 1j]) == pytest.approx(2j)
    assert complexification_formula(t2, [1.0], [1.0]) == pytest.approx(2j)


def test_complexify_rejects_complex_coefficients():
    with pytest.raises(ValueError):
        complexify(poly({(1, 1): 1 + 1e-300j}))


@given(polys(real=True, m_max=4, n_max=3), st.integers(0, 10**6))
@settings(max_examples=60, deadline=None)
def test_complexify_matches_binomial_formula(P, seed):
    r = np.random.default_rng(seed)
    x, y = r.standard_normal(P.dim), r.standard_normal(P.dim)
    direct = evaluate(complexify(P), x + 1j * y)
    scale = evaluate_modulus(P, np.abs(x) + np.abs(y))
    assert abs(direct - complexification_formula(P, x, y)) <= 1e-10 * max(1.0, scale)


def test_symmetric_form_diagonal_and_wrong_arity(rng):
    P = random_polynomial(SpaceSpec(3, 2), 3, rng)
    z = points(3, 1)
    assert symmetric_form(P, z, z, z) == pytest.approx(evaluate(P, z), rel=1e-12)
    with pytest.raises(ValueError):
        symmetric_form(P, z)


# derivatives

def test_derivative_examples():
    a1, a2 = 0.3 - 0.2j, 1.7 + 0.5j
    d = derivative_poly(poly({(1, 1): 1}), 1, [a1, a2])
    assert d.degree == 1 and d.terms == {(1, 0): a2, (0, 1): a1}
    for m in (1, 3, 5):
        P = HomogeneousPolynomial(SpaceSpec(2, 2), m, {(m, 0): 1})
        assert derivative_poly(P, m, [0.4, 9.0]) == P
    d = derivative_poly(poly({(2, 1): 1}, m=3), 1, [1, 1])
    assert d.terms == {(1, 0): 2, (0, 1): 1}


def test_derivative_against_symbolic_oracle():
    y1, y2, y3 = sympy.symbols("y1 y2 y3")
    ys = (y1, y2, y3)
    P = HomogeneousPolynomial(SpaceSpec(3, 2), 4, {(2, 1, 1): 2 - 1j, (0, 4, 0): 0.5, (1, 0, 3): 3})
    expr = sum(sympy.nsimplify(c.real) * y1**a[0] * y2**a[1] * y3**a[2] for a, c in P.terms.items()) + \
        sympy.I * sum(sympy.nsimplify(c.imag) * y1**a[0] * y2**a[1] * y3**a[2] for a, c in P.terms.items())
    a = (sympy.Rational(1, 2), sympy.Integer(-2), sympy.Rational(3, 4))
    for k in range(5):
        d = derivative_poly(P, k, [float(v) for v in a])
        # Taylor coefficient of degree k in y of P(a + y)
        shifted = sympy.expand(expr.subs({ys[j]: a[j] + ys[j] for j in range(3)}, simultaneous=True))
        part = sympy.Poly(shifted, *ys)
        want = {mono: complex(c) for mono, c in part.terms() if sum(mono) == k}
        got = d.terms
        assert set(got) == {m for m, c in want.items() if c != 0}
        for mono, c in got.items():
            assert c == pytest.approx(want[mono], rel=1e-12)


@given(polys(n_max=3, m_max=4), st.integers(0, 10**6), st.data())
@settings(max_examples=60, deadline=None)
def test_derivative_matches_polarization(P, seed, data):
    k = data.draw(st.integers(0, P.degree))
    r = np.random.default_rng(seed)
    a, y = r.standard_normal(P.dim), r.standard_normal(P.dim) + 1j * r.standard_normal(P.dim)
    d = derivative_poly(P, k, a)
    want = math.comb(P.degree, k) * symmetric_form(P, *([a] * (P.degree - k) + [y] * k))
    scale = evaluate_modulus(P, np.abs(a) + np.abs(y))
    assert abs(evaluate(d, y) - want) <= 1e-9 * max(1.0, scale)


@given(polys(n_max=3, m_max=5), st.integers(0, 10**6), st.data())
def test_derivative_commutes_with_modulus(P, seed, data):
    k = data.draw(st.integers(0, P.degree))
    a = np.random.default_rng(seed).random(P.dim)
    lhs = poly_modulus(derivative_poly(P, k, a))
    rhs = derivative_poly(poly_modulus(P), k, a)
    # with a >= 0 the coefficients are c_alpha times positive factors; cancellation can only shrink lhs
    for mono, c in lhs.terms.items():
        assert c.real <= abs(rhs.terms[mono]) * (1 + 1e-12)
    # single-term polynomials have no cancellation at all
    for alpha, c in list(P.terms.items())[:1]:
        Q = HomogeneousPolynomial(P.space, P.degree, {alpha: c})
        L, R = poly_modulus(derivative_poly(Q, k, a)), derivative_poly(poly_modulus(Q), k, a)
        assert set(L.terms) == set(R.terms)
        for mono in L.terms:
            assert L.terms[mono] == pytest.approx(R.terms[mono].real, rel=1e-12)


def test_derivative_range():
    P = poly({(1, 1): 1})
    with pytest.raises(ValueError):
        derivative_poly(P, 3, [1, 1])
    with pytest.raises(ValueError):
        derivative_poly(P, -1, [1, 1])


def test_partial_derivative():
    P = poly({(2, 1): 3, (0, 3): 1}, m=3)
    assert partial_derivative(P, 0) == poly({(1, 1): 6}, m=2)
    assert partial_derivative(P, 1) == poly({(2, 0): 3, (0, 2): 3}, m=2)


# orthogonal additivity

@pytest.mark.parametrize("P, expected", [
    (poly({(3, 0): 1, (0, 3): -1}), True),
    (poly({(1, 1): 1}), False),
    (HomogeneousPolynomial(SpaceSpec(3, 2), 2, {(2, 0, 0): 1, (0, 0, 2): 1 + 1j}), True),
])
def test_orthogonally_additive_examples(P, expected):
    assert is_orthogonally_additive(P) is expected


# json

@given(polys())
def test_json_roundtrip(P):
    assert polynomial_from_json(polynomial_to_json(P)) == P


def test_json_canonicalizes_and_validates():
    data = {"space": {"dim": 2, "p": "inf"}, "degree": 2,
            "terms": [{"alpha": [0, 2], "coeff": [1, 0]}, {"alpha": [2, 0], "coeff": [0, 1]}]}
    P = polynomial_from_json(data)
    assert list(P.terms) == [(2, 0), (0, 2)] and P.space == SpaceSpec(2, INF)
    bad = dict(data, terms=[{"alpha": [1, 0], "coeff": [1, 0]}])
    with pytest.raises(ValueError):
        polynomial_from_json(bad)
    dup = dict(data, terms=[{"alpha": [2, 0], "coeff": [1, 0]}, {"alpha": [2, 0], "coeff": [1, 0]}])
    with pytest.raises(ValueError):
        polynomial_from_json(dup)
