"""Sparse homogeneous polynomials on C^n keyed by multi-indices.

Terms are stored in graded-lexicographic order (descending lex within the
single degree), with exact zeros purged, so iteration, evaluation and
serialization are reproducible.
"""
from __future__ import annotations

import math
from itertools import combinations
from typing import Iterable, Mapping

import numpy as np

from .lattice import SpaceSpec, as_vector, modulus_point

MAX_MULTIINDICES = 10**6


def count_multiindices(n: int, m: int) -> int:
    return math.comb(m + n - 1, n - 1)


def enumerate_multiindices(n: int, m: int, cap: int = MAX_MULTIINDICES) -> list[tuple[int, ...]]:
    """All ``alpha`` in N^n with ``|alpha| = m``, descending lexicographic order."""
    if n < 1 or m < 0:
        raise ValueError(f"need n >= 1 and m >= 0, got n={n}, m={m}")
    count = count_multiindices(n, m)
    if count > cap:
        raise OverflowError(f"{count} multi-indices of degree {m} in {n} variables exceeds cap {cap}")
    out = []
    # stars and bars: bar positions among m + n - 1 slots
    for bars in combinations(range(m + n - 1), n - 1):
        prev = -1
        alpha = []
        for b in bars:
            alpha.append(b - prev - 1)
            prev = b
        alpha.append(m + n - 2 - prev)
        out.append(tuple(alpha))
    out.sort(reverse=True)
    return out


class HomogeneousPolynomial:
    """``P(z) = sum_alpha c_alpha z^alpha`` with every ``|alpha|`` equal to ``degree``."""

    __slots__ = ("space", "degree", "_terms", "_exps", "_coeffs")

    def __init__(self, space: SpaceSpec, degree: int, terms: Mapping[Iterable[int], complex] | None = None):
        if degree < 0:
            raise ValueError("degree must be nonnegative")
        self.space = space
        self.degree = int(degree)
        clean: dict[tuple[int, ...], complex] = {}
        for alpha, c in (terms or {}).items():
            alpha = tuple(int(a) for a in alpha)
            if len(alpha) != space.dim:
                raise ValueError(f"multi-index {alpha} has length {len(alpha)}, space dimension is {space.dim}")
            if any(a < 0 for a in alpha):
                raise ValueError(f"negative exponent in {alpha}")
            if sum(alpha) != self.degree:
                raise ValueError(f"multi-index {alpha} has order {sum(alpha)}, polynomial degree is {self.degree}")
            clean[alpha] = clean.get(alpha, 0) + complex(c)
        self._terms = {a: clean[a] for a in sorted(clean, reverse=True) if clean[a] != 0}
        if self._terms:
            self._exps = np.array(list(self._terms), dtype=np.int64)
            self._coeffs = np.array(list(self._terms.values()), dtype=complex)
        else:
            self._exps = np.zeros((0, space.dim), dtype=np.int64)
            self._coeffs = np.zeros(0, dtype=complex)
        self._exps.setflags(write=False)
        self._coeffs.setflags(write=False)

    @classmethod
    def from_arrays(cls, space, degree, exps, coeffs):
        return cls(space, degree, {tuple(a): c for a, c in zip(np.asarray(exps), np.asarray(coeffs))})

    @classmethod
    def monomial(cls, space, alpha, coeff=1.0):
        return cls(space, sum(alpha), {tuple(alpha): coeff})

    @classmethod
    def zero(cls, space, degree):
        return cls(space, degree, {})

    @property
    def terms(self) -> dict[tuple[int, ...], complex]:
        return dict(self._terms)

    @property
    def exponents(self) -> np.ndarray:
        return self._exps

    @property
    def coeffs(self) -> np.ndarray:
        return self._coeffs

    @property
    def dim(self) -> int:
        return self.space.dim

    def __len__(self):
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_real(self) -> bool:
        return bool(np.all(self._coeffs.imag == 0))

    def is_positive(self) -> bool:
        return bool(np.all(self._coeffs.imag == 0) and np.all(self._coeffs.real >= 0))

    def __call__(self, z):
        return evaluate(self, z)

    def __eq__(self, other):
        if not isinstance(other, HomogeneousPolynomial):
            return NotImplemented
        return self.space == other.space and self.degree == other.degree and self._terms == other._terms

    def __hash__(self):
        return hash((self.space, self.degree, tuple(self._terms.items())))

    def _check_compatible(self, other):
        if self.space != other.space or self.degree != other.degree:
            raise ValueError("polynomials live on different spaces or have different degrees")

    def __add__(self, other):
        if not isinstance(other, HomogeneousPolynomial):
            return NotImplemented
        self._check_compatible(other)
        terms = dict(self._terms)
        for a, c in other._terms.items():
            terms[a] = terms.get(a, 0) + c
        return HomogeneousPolynomial(self.space, self.degree, terms)

    def __neg__(self):
        return self * -1

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, scalar):
        if isinstance(scalar, HomogeneousPolynomial):
            return NotImplemented
        s = complex(scalar)
        return HomogeneousPolynomial(self.space, self.degree, {a: s * c for a, c in self._terms.items()})

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return self * (1.0 / complex(scalar))

    def embed(self, dim: int, offset: int = 0) -> "HomogeneousPolynomial":
        """Same polynomial in ``dim`` variables, its variables shifted by ``offset``."""
        if offset < 0 or offset + self.dim > dim:
            raise ValueError("embedding does not fit")
        pad = (0,) * offset
        tail = (0,) * (dim - offset - self.dim)
        return HomogeneousPolynomial(self.space.with_dim(dim), self.degree,
                                     {pad + a + tail: c for a, c in self._terms.items()})

    def __repr__(self):
        if not self._terms:
            return f"HomogeneousPolynomial({self.space}, degree={self.degree}, 0)"
        parts = []
        for a, c in self._terms.items():
            mono = "*".join(f"z{j + 1}^{e}" if e > 1 else f"z{j + 1}" for j, e in enumerate(a) if e)
            parts.append(f"({c:.6g})" + (f"*{mono}" if mono else ""))
        return f"HomogeneousPolynomial({self.space}, degree={self.degree}, " + " + ".join(parts) + ")"


def power_table(z: np.ndarray, m: int) -> np.ndarray:
    """``out[..., j, k] = z[..., j]**k`` for ``k = 0..m``, built by repeated products."""
    out = np.empty(z.shape + (m + 1,), dtype=np.result_type(z, complex))
    out[..., 0] = 1.0
    for k in range(1, m + 1):
        out[..., k] = out[..., k - 1] * z
    return out


def monomials(exps: np.ndarray, z: np.ndarray) -> np.ndarray:
    """``z^alpha`` for every row of ``exps``; ``z`` may carry leading batch axes."""
    z = np.asarray(z)
    if exps.shape[0] == 0:
        return np.zeros(z.shape[:-1] + (0,), dtype=complex)
    pw = power_table(z, int(exps.max(initial=0)))
    n = z.shape[-1]
    gathered = pw[..., np.arange(n)[None, :], exps]
    return gathered.prod(axis=-1)


def evaluate(P: HomogeneousPolynomial, z) -> complex:
    """``sum_alpha c_alpha z^alpha``, summed in canonical term order."""
    z = np.asarray(z, dtype=complex)
    if z.shape[-1] != P.dim:
        raise ValueError(f"dimension mismatch: point has {z.shape[-1]} entries, polynomial has {P.dim} variables")
    if P.is_zero():
        return np.zeros(z.shape[:-1], dtype=complex)[()] if z.ndim > 1 else 0j
    vals = monomials(P.exponents, z) @ P.coeffs
    return vals if z.ndim > 1 else complex(vals)


def evaluate_modulus(P: HomogeneousPolynomial, z) -> float:
    """``|P|(|z|)``."""
    return float(np.real(evaluate(poly_modulus(P), modulus_point(as_vector(z, P.dim)))))


def poly_modulus(P: HomogeneousPolynomial) -> HomogeneousPolynomial:
    return HomogeneousPolynomial(P.space, P.degree, {a: abs(c) for a, c in P._terms.items()})


def real_imag_parts(P: HomogeneousPolynomial) -> tuple[HomogeneousPolynomial, HomogeneousPolynomial]:
    re = HomogeneousPolynomial(P.space, P.degree, {a: c.real for a, c in P._terms.items()})
    im = HomogeneousPolynomial(P.space, P.degree, {a: c.imag for a, c in P._terms.items()})
    return re, im


def complexify(P: HomogeneousPolynomial) -> HomogeneousPolynomial:
    """Complex extension of a real polynomial.

    In monomial coordinates the extension keeps the coefficient data; only
    the domain changes. Raises if any coefficient has a nonzero imaginary part.
    """
    if not P.is_real():
        raise ValueError("complexify expects a polynomial with real coefficients")
    return HomogeneousPolynomial(P.space, P.degree, P._terms)


def symmetric_form(P: HomogeneousPolynomial, *vectors) -> complex:
    """Symmetric m-linear form ``A(v_1, ..., v_m)`` with ``A(z, ..., z) = P(z)``.

    Computed by polarization over sign patterns; ``m`` vectors are required.
    """
    m = P.degree
    if len(vectors) != m:
        raise ValueError(f"need {m} vectors, got {len(vectors)}")
    if m == 0:
        return complex(evaluate(P, np.zeros(P.dim)))
    vs = np.array([as_vector(v, P.dim) for v in vectors])
    total = 0j
    for mask in range(1 << m):
        signs = np.array([-1.0 if (mask >> i) & 1 else 1.0 for i in range(m)])
        total += np.prod(signs) * evaluate(P, signs @ vs)
    return total / (2**m * math.factorial(m))


def complexification_formula(P: HomogeneousPolynomial, x, y) -> complex:
    """``P_C(x + iy)`` via the binomial expansion in the symmetric form of ``P``.

    ``sum_k C(m,k) i^k A(x^(m-k), y^k)``; independent of monomial evaluation
    at complex points and used as a check on :func:`complexify`.
    """
    m = P.degree
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    total = 0j
    for k in range(m + 1):
        total += math.comb(m, k) * (1j**k) * symmetric_form(P, *([x] * (m - k) + [y] * k))
    return total


def derivative_poly(P: HomogeneousPolynomial, k: int, a) -> HomogeneousPolynomial:
    """Taylor-normalized ``k``-th derivative ``y -> d^kP(a)(y) / k!``.

    Coefficient of ``y^beta`` (``|beta| = k``) is
    ``sum_alpha c_alpha C(alpha, beta) a^(alpha - beta)`` where
    ``C(alpha, beta) = prod_j binom(alpha_j, beta_j)``.
    """
    m = P.degree
    if not 0 <= k <= m:
        raise ValueError(f"derivative order {k} outside [0, {m}]")
    a = as_vector(a, P.dim)
    terms: dict[tuple[int, ...], complex] = {}
    for alpha, c in P._terms.items():
        for beta in _sub_indices(alpha, k):
            factor = 1
            rest = 1 + 0j
            for aj, bj, xj in zip(alpha, beta, a):
                factor *= math.comb(aj, bj)
                if aj > bj:
                    rest *= xj ** (aj - bj)
            terms[beta] = terms.get(beta, 0) + c * factor * rest
    return HomogeneousPolynomial(P.space, k, terms)


def _sub_indices(alpha, k):
    """All ``beta <= alpha`` coordinatewise with ``|beta| = k``."""
    def rec(j, remaining):
        if j == len(alpha):
            if remaining == 0:
                yield ()
            return
        for b in range(min(alpha[j], remaining), -1, -1):
            for tail in rec(j + 1, remaining - b):
                yield (b,) + tail
    yield from rec(0, k)


def partial_derivative(P: HomogeneousPolynomial, j: int) -> HomogeneousPolynomial:
    terms = {}
    for alpha, c in P._terms.items():
        if alpha[j]:
            beta = alpha[:j] + (alpha[j] - 1,) + alpha[j + 1:]
            terms[beta] = c * alpha[j]
    return HomogeneousPolynomial(P.space, P.degree - 1 if P.degree else 0, terms)


def is_orthogonally_additive(P: HomogeneousPolynomial) -> bool:
    """True when every monomial involves a single variable."""
    return all(sum(1 for e in alpha if e) <= 1 for alpha in P._terms)


def random_polynomial(space: SpaceSpec, m: int, rng: np.random.Generator, *, real: bool = False,
                      positive: bool = False, density: float = 1.0) -> HomogeneousPolynomial:
    """Gaussian coefficients on a random subset of the degree-``m`` monomials."""
    alphas = enumerate_multiindices(space.dim, m)
    keep = rng.random(len(alphas)) < density
    if not keep.any():
        keep[rng.integers(len(alphas))] = True
    coeffs = rng.standard_normal(len(alphas))
    if positive:
        coeffs = np.abs(coeffs)
    elif not real:
        coeffs = coeffs + 1j * rng.standard_normal(len(alphas))
    return HomogeneousPolynomial(space, m, {a: c for a, c, k in zip(alphas, coeffs, keep) if k})


def polynomial_to_json(P: HomogeneousPolynomial) -> dict:
    return {
        "space": P.space.to_json(),
        "degree": P.degree,
        "terms": [{"alpha": list(a), "coeff": [c.real, c.imag]} for a, c in P._terms.items()],
    }


def polynomial_from_json(data: dict) -> HomogeneousPolynomial:
    space = SpaceSpec.from_json(data["space"])
    degree = int(data["degree"])
    terms: dict[tuple[int, ...], complex] = {}
    for t in data["terms"]:
        alpha = tuple(int(a) for a in t["alpha"])
        c = t["coeff"]
        c = complex(float(c[0]), float(c[1])) if isinstance(c, (list, tuple)) else complex(float(c))
        if alpha in terms:
            raise ValueError(f"duplicate multi-index {alpha}")
        terms[alpha] = c
    return HomogeneousPolynomial(space, degree, terms)
