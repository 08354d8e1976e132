"""Orthogonally additive (diagonal) polynomials ``P(z) = sum_k c_k z_k^m``."""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .lattice import INF, SpaceSpec, lp_norm, vector_from_json, vector_to_json
from .norms import (NormEstimate, OptimizerConfig, estimate_real_sup_norm, estimate_regular_norm,
                    estimate_sup_norm)
from .poly import HomogeneousPolynomial, is_orthogonally_additive
from .series import PowerSeries, RadiusReport, radii


@dataclass(frozen=True)
class DiagonalPolynomial:
    space: SpaceSpec
    degree: int
    diag_coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.diag_coeffs, dtype=complex)
        if c.shape != (self.space.dim,):
            raise ValueError(f"need {self.space.dim} diagonal coefficients, got shape {c.shape}")
        if self.degree < 1:
            raise ValueError("degree must be >= 1")
        c.setflags(write=False)
        object.__setattr__(self, "diag_coeffs", c)

    def to_polynomial(self) -> HomogeneousPolynomial:
        n, m = self.space.dim, self.degree
        terms = {}
        for k, c in enumerate(self.diag_coeffs):
            alpha = [0] * n
            alpha[k] = m
            terms[tuple(alpha)] = c
        return HomogeneousPolynomial(self.space, m, terms)

    @classmethod
    def from_polynomial(cls, P: HomogeneousPolynomial) -> "DiagonalPolynomial":
        if not is_orthogonally_additive(P) or P.degree < 1:
            raise ValueError("polynomial has mixed monomials; it is not orthogonally additive")
        c = np.zeros(P.dim, dtype=complex)
        for alpha, coef in P.terms.items():
            c[int(np.argmax(alpha))] = coef
        return cls(P.space, P.degree, c)

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        return complex(np.sum(self.diag_coeffs * z**self.degree))

    def to_json(self) -> dict:
        return {"space": self.space.to_json(), "degree": self.degree, "diag": vector_to_json(self.diag_coeffs)}

    @classmethod
    def from_json(cls, data: dict) -> "DiagonalPolynomial":
        return cls(SpaceSpec.from_json(data["space"]), int(data["degree"]), vector_from_json(data["diag"]))


def exact_regular_norm(P: DiagonalPolynomial) -> tuple[float, np.ndarray]:
    """``sup sum |c_k| x_k^m`` over the positive unit sphere, with a maximizer.

    Substituting ``u_k = x_k^p`` turns the problem into maximizing
    ``sum |c_k| u_k^(m/p)`` on the simplex: linear or convex for ``m >= p``
    (a vertex wins), concave for ``m < p`` (Lagrange gives the interior point).
    """
    b = np.abs(P.diag_coeffs)
    n, m, p = P.space.dim, P.degree, P.space.p
    if p == INF:
        return float(b.sum()), np.ones(n)
    if m >= p or not b.any():
        k = int(np.argmax(b))
        x = np.zeros(n)
        x[k] = 1.0
        return float(b[k]), x
    r = m / p
    u = b ** (1.0 / (1.0 - r))
    u = u / u.sum()
    x = u ** (1.0 / p)
    return lp_norm(b, p / (p - m)), x


def rotation_witness(P: DiagonalPolynomial, x) -> np.ndarray:
    """``z_k = x_k exp(-i phi_k / m)`` for ``c_k = |c_k| exp(i phi_k)``, principal branch."""
    phi = np.angle(P.diag_coeffs)
    return np.asarray(x, dtype=float) * np.exp(-1j * phi / P.degree)


def oa_norm_pair(P: DiagonalPolynomial, cfg: OptimizerConfig | None = None) -> tuple[NormEstimate, NormEstimate]:
    """Generic sup and regular norm estimates, with the phase-rotation witness attached to sup."""
    cfg = cfg or OptimizerConfig()
    H = P.to_polynomial()
    sup = estimate_sup_norm(H, cfg)
    reg = estimate_regular_norm(H, cfg)
    exact, x = exact_regular_norm(P)
    z = rotation_witness(P, x)
    extra = {"rotation_witness": z, "rotation_value": abs(P(z)), "exact_regular": exact}
    return replace(sup, extra=extra), reg


def oa_real_ratio(m: int, cfg: OptimizerConfig | None = None) -> float:
    """``||P||_r / ||P||`` for ``x_1^m - x_2^m`` on real l_inf^2 (even ``m`` only)."""
    if m < 2 or m % 2:
        raise ValueError("the real sharpness example needs an even degree m >= 2; for odd m the norms agree")
    cfg = cfg or OptimizerConfig()
    space = SpaceSpec(2, INF)
    P = HomogeneousPolynomial(space, m, {(m, 0): 1.0, (0, m): -1.0})
    sup = estimate_real_sup_norm(P, cfg).value
    reg = estimate_regular_norm(P, cfg).value
    return reg / sup


def diagonal_series(terms: list[DiagonalPolynomial]) -> PowerSeries:
    degrees = [t.degree for t in terms]
    if any(b <= a for a, b in zip(degrees, degrees[1:])):
        raise ValueError("diagonal series terms need strictly increasing degrees")
    space = terms[0].space
    return PowerSeries.from_terms(space, [t.to_polynomial() for t in terms])


def oa_series_radius_check(terms: list[DiagonalPolynomial], cfg: OptimizerConfig | None = None,
                           rtol: float = 1e-6) -> RadiusReport:
    """Radii of an orthogonally additive series; they must coincide."""
    f = diagonal_series(terms)
    rep = radii(f, cfg)
    if np.isfinite(rep.r) and abs(rep.r - rep.r_reg) > rtol * rep.r:
        raise AssertionError(f"radii differ for an orthogonally additive series: r={rep.r}, r_reg={rep.r_reg}")
    return rep


def random_diagonal(space: SpaceSpec, m: int, rng: np.random.Generator) -> DiagonalPolynomial:
    c = rng.standard_normal(space.dim) + 1j * rng.standard_normal(space.dim)
    return DiagonalPolynomial(space, m, c)


__all__ = [
    "DiagonalPolynomial", "exact_regular_norm", "rotation_witness", "oa_norm_pair", "oa_real_ratio",
    "diagonal_series", "oa_series_radius_check", "random_diagonal",
]
