"""Polynomials with a prescribed regular-to-sup norm ratio, and series built from them.

Along a path on the sup-norm unit sphere from ``z_1^m`` (ratio 1) to a
polynomial with a large ratio, ``lambda(t) = ||gamma(t)||_r^(1/m)`` is
continuous, so bisection finds ``lambda(t) = eta``.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field

import numpy as np

from .bohr import estimate_bohr_m
from .lattice import SpaceSpec
from .norms import OptimizerConfig, estimate_regular_norm, estimate_sup_norm
from .poly import HomogeneousPolynomial, count_multiindices, poly_modulus
from .series import PowerSeries

DEGENERATE_NORM = 1e-8


class EtaUnreachableError(RuntimeError):
    """No extremal polynomial with ratio above ``eta^m`` within the dimension cap."""


class BracketError(RuntimeError):
    """The re-estimated ratio at the far endpoint does not exceed ``eta``."""


@dataclass(frozen=True)
class ConstructionResult:
    P: HomogeneousPolynomial
    achieved_eta: float
    n_used: int
    bisection_steps: int
    path_endpoints: tuple
    t: float = 0.0
    trace: list = field(default_factory=list, compare=False)
    source: str = ""
    waypoint: bool = False  # path rerouted through Q + |P_m| after a near-zero polynomial

    def provenance(self) -> dict:
        return {"n_used": self.n_used, "bisection_steps": self.bisection_steps, "t": self.t,
                "achieved_eta": self.achieved_eta, "source": self.source, "waypoint": self.waypoint,
                "trace": [{"t": t, "lambda": lam} for t, lam in self.trace]}


def disjoint_product(*factors: HomogeneousPolynomial) -> HomogeneousPolynomial:
    """Product of polynomials placed on consecutive disjoint blocks of variables.

    On l_p the sup norm and the regular norm both pick up the same factor
    ``sup{prod s_i^(m_i) : sum s_i^p = 1}``, so the norm ratios multiply.
    """
    p = factors[0].space.p
    dim = sum(F.dim for F in factors)
    m = sum(F.degree for F in factors)
    terms = {(): 1.0 + 0j}
    for F in factors:
        new = {}
        for a, c in terms.items():
            for b, d in F.terms.items():
                key = a + b
                new[key] = new.get(key, 0) + c * d
        terms = new
    return HomogeneousPolynomial(SpaceSpec(dim, p), m, terms)


@functools.lru_cache(maxsize=None)
def _quadratic_witness(p: float, cfg: OptimizerConfig) -> tuple[HomogeneousPolynomial, float]:
    est = estimate_bohr_m(SpaceSpec(2, p), 2, cfg)
    return est.witness_poly, est.ratio_sup


def find_extremal(p: float, m: int, eta: float, cfg: OptimizerConfig, *, n_cap: int = 64,
                  search_terms: int = 12) -> tuple[HomogeneousPolynomial, str]:
    """A polynomial of degree ``m`` with ``||P||_r / ||P|| > eta^m``.

    First tries disjoint products of the quadratic witness found by Bohr
    search on l_p^2; ratios multiply, so ``k`` factors give ``rho^k``. The
    fewest factors that clear ``eta^m`` are used and the leftover degree goes
    to a power of one extra variable (ratio 1), which keeps the support at
    ``3^k`` monomials. Otherwise runs direct Bohr search on l_p^n for
    n = 2, 4, ... while the monomial count stays at or below ``search_terms``.
    """
    target = eta**m
    if m >= 2:
        W, rho = _quadratic_witness(p, cfg)
        k = next((j for j in range(1, m // 2 + 1) if rho**j > target), None)
        if k is not None:
            r = m - 2 * k
            if 2 * k + (r > 0) <= n_cap:
                factors = [W] * k
                if r:
                    factors.append(HomogeneousPolynomial.monomial(SpaceSpec(1, p), (r,)))
                if len(factors) == 1:
                    return W, "search l_p^2"
                tail = f" and z^{r}" if r else ""
                return disjoint_product(*factors), f"product of {k} quadratic witnesses{tail}"
    n = 2
    while n <= n_cap and count_multiindices(n, m) <= search_terms:
        est = estimate_bohr_m(SpaceSpec(n, p), m, cfg)
        if est.ratio_sup > target:
            return est.witness_poly, f"search l_p^{n}"
        n *= 2
    raise EtaUnreachableError(f"no degree-{m} polynomial on l_{p:g}^n (n <= {n_cap}) found with ratio above {target:.6g}")


class _Path:
    """Piecewise linear path through ``nodes``, each point rescaled to sup norm one."""

    def __init__(self, nodes):
        self.nodes = nodes

    def raw(self, t):
        k = len(self.nodes) - 1
        i = min(int(t * k), k - 1)
        s = t * k - i
        return self.nodes[i] * (1 - s) + self.nodes[i + 1] * s


def construct_ratio_polynomial(p: float, m: int, eta: float, cfg: OptimizerConfig | None = None, *,
                               extremal: HomogeneousPolynomial | None = None, n_cap: int = 64,
                               tol: float = 1e-4, max_steps: int = 60) -> ConstructionResult:
    """``P`` with ``||P|| = 1`` and ``||P||_r^(1/m) = eta`` (to ``tol``).

    The root of ``lambda(t) - eta`` is bracketed on ``[0, 1]`` and the
    bracket shrinks by false-position steps (Illinois rule), each step
    re-estimating both norms. Monotonicity of ``lambda`` is not assumed.
    """
    cfg = cfg or OptimizerConfig()
    if eta < 1:
        raise ValueError("eta must be >= 1")
    if m < 1:
        raise ValueError("degree must be >= 1")
    if extremal is None and eta - 1.0 <= tol:
        Q = HomogeneousPolynomial.monomial(SpaceSpec(1, p), (m,))
        return ConstructionResult(Q, 1.0, 1, 0, (Q, Q), 0.0, [(0.0, 1.0)], "positive endpoint")
    if extremal is None:
        Pm, source = find_extremal(p, m, eta, cfg, n_cap=n_cap)
    else:
        Pm, source = extremal, "given"
        if Pm.degree != m:
            raise ValueError("extremal polynomial has the wrong degree")
    n = Pm.dim
    space = Pm.space
    Pm = Pm / estimate_sup_norm(Pm, cfg).value
    Q = HomogeneousPolynomial.monomial(space, (m,) + (0,) * (n - 1))

    def lam(path, t):
        raw = path.raw(t)
        s = estimate_sup_norm(raw, cfg).value if not raw.is_zero() else 0.0
        if s < DEGENERATE_NORM:
            return None, None
        g = raw / s
        return estimate_regular_norm(g, cfg).value ** (1.0 / m), g

    path = _Path([Q, Pm])
    trace = []
    for attempt in range(2):
        trace.clear()
        lam_hi, g_hi = lam(path, 1.0)
        trace.append((1.0, lam_hi))
        if lam_hi < eta - tol:
            raise BracketError(f"ratio root at t=1 is {lam_hi:.8g}, not above eta={eta}")
        # bracket: lambda(lo) < eta < lambda(hi); lambda(0) = 1 exactly
        lo, f_lo = 0.0, 1.0 - eta
        hi, f_hi = 1.0, lam_hi - eta
        best = (1.0, lam_hi, g_hi)
        steps = 0
        degenerate = False
        side = 0
        while abs(best[1] - eta) >= tol and steps < max_steps:
            # Illinois false position, falling back to the midpoint near the ends
            mid = hi - f_hi * (hi - lo) / (f_hi - f_lo)
            if not lo + 1e-3 * (hi - lo) < mid < hi - 1e-3 * (hi - lo):
                mid = 0.5 * (lo + hi)
            lm, g = lam(path, mid)
            steps += 1
            if lm is None:
                degenerate = True
                break
            trace.append((mid, lm))
            if abs(lm - eta) < abs(best[1] - eta):
                best = (mid, lm, g)
            if lm < eta:
                lo, f_lo = mid, lm - eta
                if side == -1:
                    f_hi *= 0.5
                side = -1
            else:
                hi, f_hi = mid, lm - eta
                if side == 1:
                    f_lo *= 0.5
                side = 1
        if not degenerate:
            t, lm, g = best
            return ConstructionResult(g, lm, n, steps, (Q, Pm), t, list(trace), source, waypoint=attempt > 0)
        # route around the zero polynomial through a positive waypoint
        W = Q + poly_modulus(Pm)
        path = _Path([Q, W / estimate_sup_norm(W, cfg).value, Pm])
    raise BracketError("path degenerate even after the positive waypoint")


def construct_small_regular_radius_series(p: float, tau: float, M: int, cfg: OptimizerConfig | None = None,
                                          *, n_cap: int = 64, tol: float = 1e-4) -> PowerSeries:
    """Series ``sum_{m=2}^M P_m`` with ``||P_m|| = 1`` and ``||P_m||_r^(1/m) = 1/tau``.

    Each term is padded with unused variables to a common dimension.
    """
    cfg = cfg or OptimizerConfig()
    if not 0 < tau <= 1:
        raise ValueError("tau must lie in (0, 1]")
    if M < 2:
        raise ValueError("need M >= 2")
    eta = 1.0 / tau
    results = {}
    for m in range(2, M + 1):
        try:
            results[m] = construct_ratio_polynomial(p, m, eta, cfg, n_cap=n_cap, tol=tol)
        except (EtaUnreachableError, BracketError) as exc:
            raise type(exc)(f"degree {m}: {exc}") from exc
    N = max(r.n_used for r in results.values())
    space = SpaceSpec(N, p)
    polys = [r.P.embed(N) for r in results.values()]
    prov = {"tau": tau, "eta": eta, "ambient_dim": N, "degrees": {str(m): r.provenance() for m, r in results.items()}}
    return PowerSeries.from_terms(space, polys, prov)
