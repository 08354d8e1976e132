"""Sup and regular norms of homogeneous polynomials on l_p^n.

Estimates are lower bounds: the best value found by a seeded multistart
local search over the unit sphere. Exact values are used where they are
cheap (regular norm on l_inf, the l_1 bracket for single terms).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from . import _optim
from .lattice import INF, SpaceSpec, as_vector, log_interpolate, lp_norm, vector_to_json
from .poly import HomogeneousPolynomial, evaluate, partial_derivative, poly_modulus


class NonConvergenceError(RuntimeError):
    """Every start hit the iteration cap. ``estimate`` holds the best point anyway."""

    def __init__(self, message, estimate=None):
        super().__init__(message)
        self.estimate = estimate


@dataclass(frozen=True)
class OptimizerConfig:
    starts: int = 64
    seed: int = 0
    tol: float = 1e-10
    max_iter: int = 500

    def __post_init__(self):
        if self.starts < 1:
            raise ValueError("starts must be >= 1")
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")
        if not self.tol > 0:
            raise ValueError("tol must be positive")

    def with_(self, **kw) -> "OptimizerConfig":
        return replace(self, **kw)

    def rng(self, stream: int = 0) -> np.random.Generator:
        return np.random.default_rng([self.seed & (2**64 - 1), stream])

    def to_json(self) -> dict:
        return {"starts": self.starts, "seed": self.seed, "tol": self.tol, "max_iter": self.max_iter}

    @classmethod
    def from_json(cls, data: dict) -> "OptimizerConfig":
        known = {k: data[k] for k in ("starts", "seed", "tol", "max_iter") if k in data}
        return cls(**known)


@dataclass(frozen=True)
class NormEstimate:
    value: float
    witness: np.ndarray
    starts: int
    spread: float
    seed: int
    converged: int = 0
    kind: str = "sup"
    exact: bool = False
    extra: dict = field(default_factory=dict, compare=False)

    def to_json(self) -> dict:
        out = {
            "kind": self.kind,
            "value": self.value,
            "witness": vector_to_json(self.witness),
            "starts": self.starts,
            "converged": self.converged,
            "spread": self.spread,
            "seed": self.seed,
            "exact": self.exact,
        }
        if self.extra:
            out["extra"] = {k: v for k, v in self.extra.items() if k != "rotation_witness"}
            if "rotation_witness" in self.extra:
                out["extra"]["rotation_witness"] = vector_to_json(self.extra["rotation_witness"])
        return out


def _pack(results, starts, seed, kind, valid_only=True):
    """Reduce a batch to one NormEstimate per polynomial: max value, ties to lowest start index."""
    out = []
    B = results.values.shape[0]
    for b in range(B):
        vals = results.values[b]
        best = int(np.argmax(vals))  # argmax returns the first maximal index
        conv = results.converged[b] & results.valid[b]
        cv = vals[conv]
        spread = float(cv.max() - cv.min()) if cv.size else float("nan")
        out.append(NormEstimate(float(vals[best]), results.points[b, best].copy(), starts, spread, seed,
                                int(conv.sum()), kind))
    return out


def _check(est: NormEstimate, P):
    if est.converged == 0 and not est.exact:
        raise NonConvergenceError(f"no start converged for {P!r} within the iteration cap", est)
    return est


def _zero_estimate(P, cfg, kind):
    w = np.zeros(P.dim, dtype=complex)
    w[0] = 1.0
    return NormEstimate(0.0, w, cfg.starts, 0.0, cfg.seed, cfg.starts, kind, exact=True)


def _require_degree(P):
    if P.degree < 1:
        raise ValueError("norm estimation needs degree >= 1")


def sup_norms(polys, cfg: OptimizerConfig, stream: int = 0, check: bool = True) -> list[NormEstimate]:
    """Sup norms of several polynomials sharing one support (batched)."""
    if not polys:
        return []
    P0 = polys[0]
    exps, coeffs = _shared_support(polys)
    res = _optim.maximize_batch(exps, coeffs, P0.space.p, real=False, starts=cfg.starts, rng=cfg.rng(stream),
                                tol=cfg.tol, max_iter=cfg.max_iter)
    ests = _pack(res, cfg.starts, cfg.seed, "sup")
    out = []
    for P, e in zip(polys, ests):
        if P.is_zero():
            e = _zero_estimate(P, cfg, "sup")
        else:
            e = replace(e, value=abs(evaluate(P, e.witness)))
        out.append(_check(e, P) if check else e)
    return out


def regular_norms(polys, cfg: OptimizerConfig, stream: int = 1, check: bool = True) -> list[NormEstimate]:
    """Regular norms ``|| |P| ||`` of several polynomials sharing one support."""
    if not polys:
        return []
    P0 = polys[0]
    exps, coeffs = _shared_support(polys)
    coeffs = np.abs(coeffs)
    if P0.space.is_inf:
        out = []
        for P, row in zip(polys, coeffs):
            w = np.ones(P.dim, dtype=complex)
            out.append(NormEstimate(float(row.sum()), w, cfg.starts, 0.0, cfg.seed, cfg.starts, "regular", exact=True))
        return out
    res = _optim.maximize_batch(exps, coeffs, P0.space.p, real=True, positive=True, starts=cfg.starts,
                                rng=cfg.rng(stream), tol=cfg.tol, max_iter=cfg.max_iter)
    ests = _pack(res, cfg.starts, cfg.seed, "regular")
    out = []
    for P, e in zip(polys, ests):
        if P.is_zero():
            out.append(_zero_estimate(P, cfg, "regular"))
            continue
        w = np.abs(e.witness).astype(complex)
        e = replace(e, witness=w, value=float(np.real(evaluate(poly_modulus(P), w))))
        out.append(_check(e, P) if check else e)
    return out


def _shared_support(polys):
    P0 = polys[0]
    keys = {}
    for P in polys:
        if P.space != P0.space or P.degree != P0.degree:
            raise ValueError("batched polynomials must share space and degree")
        for a in P.terms:
            keys.setdefault(a, None)
    alphas = sorted(keys, reverse=True)
    if not alphas:
        alphas = [(P0.degree,) + (0,) * (P0.dim - 1)]
    index = {a: i for i, a in enumerate(alphas)}
    coeffs = np.zeros((len(polys), len(alphas)), dtype=complex)
    for b, P in enumerate(polys):
        for a, c in P.terms.items():
            coeffs[b, index[a]] = c
    return np.array(alphas, dtype=np.int64), coeffs


def estimate_sup_norm(P: HomogeneousPolynomial, cfg: OptimizerConfig | None = None) -> NormEstimate:
    """``||P|| = sup{|P(z)| : ||z||_p <= 1}`` over complex points, as a lower bound."""
    cfg = cfg or OptimizerConfig()
    _require_degree(P)
    return sup_norms([P], cfg)[0]


def estimate_regular_norm(P: HomogeneousPolynomial, cfg: OptimizerConfig | None = None) -> NormEstimate:
    """``||P||_r = sup |P|(x)`` over the nonnegative part of the unit sphere.

    ``|P|`` has nonnegative coefficients so phases cannot help; the witness
    is a nonnegative real vector. On l_inf the value is exact: ``sum |c_alpha|``.
    """
    cfg = cfg or OptimizerConfig()
    _require_degree(P)
    return regular_norms([P], cfg)[0]


def estimate_real_sup_norm(P: HomogeneousPolynomial, cfg: OptimizerConfig | None = None) -> NormEstimate:
    """Sup of ``|P(x)|`` over the real unit sphere (real coefficients expected)."""
    cfg = cfg or OptimizerConfig()
    _require_degree(P)
    if not P.is_real():
        raise ValueError("real sup norm needs real coefficients")
    if P.is_zero():
        return _zero_estimate(P, cfg, "real_sup")
    res = _optim.maximize_batch(P.exponents, P.coeffs[None], P.space.p, real=True, starts=cfg.starts,
                                rng=cfg.rng(2), tol=cfg.tol, max_iter=cfg.max_iter)
    e = _pack(res, cfg.starts, cfg.seed, "real_sup")[0]
    w = e.witness.real.astype(complex)
    return _check(replace(e, witness=w, value=abs(evaluate(P, w))), P)


def regular_norm_bounds_l1(P: HomogeneousPolynomial) -> tuple[float, float]:
    """Closed-form bracket for ``||P||_r`` on l_1^n.

    Each monomial peaks on the simplex at ``x = alpha/m`` with value
    ``alpha^alpha / m^m``, so the largest single term is a lower bound and
    the sum an upper bound.
    """
    if P.space.p != 1:
        raise ValueError("regular_norm_bounds_l1 requires an l_1 space")
    m = P.degree
    if P.is_zero():
        return 0.0, 0.0
    peaks = []
    for alpha, c in P.terms.items():
        # log of alpha^alpha / m^m, with 0^0 = 1
        lg = sum(a * math.log(a) for a in alpha if a) - (m * math.log(m) if m else 0.0)
        peaks.append(abs(c) * math.exp(lg))
    return max(peaks), math.fsum(peaks)


def holder_check(P: HomogeneousPolynomial, x, y, theta: float, rtol: float = 1e-10):
    """Compare ``P(x^theta y^(1-theta))`` with ``P(x)^theta P(y)^(1-theta)`` for positive ``P``."""
    if not P.is_positive():
        raise ValueError("holder_check needs nonnegative coefficients")
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if np.any(x < 0) or np.any(y < 0):
        raise ValueError("x and y must be nonnegative")
    mid = log_interpolate(x, y, theta)
    lhs = float(np.real(evaluate(P, mid)))
    px = float(np.real(evaluate(P, x)))
    py = float(np.real(evaluate(P, y)))
    rhs = px**theta * py ** (1.0 - theta)
    return lhs, rhs, lhs <= rhs + rtol * max(1.0, rhs)


def gradient_regular_norm(P: HomogeneousPolynomial, cfg: OptimizerConfig | None = None) -> float:
    """Regular norm of ``x -> A(x^(m-1), .)`` as a map into the dual lattice.

    Here ``A(x^(m-1), e_j) = d_j P(x) / m``. Supported on l_1 (dual l_inf,
    where the supremum splits over coordinates) and l_inf (dual l_1, where
    the dual norm of a positive vector is its sum).
    """
    cfg = cfg or OptimizerConfig()
    p = P.space.p
    m = P.degree
    Pm = poly_modulus(P)
    if m == 1:
        return lp_norm(np.abs(P.coeffs), P.space.dual_p) if not P.is_zero() else 0.0
    parts = [partial_derivative(Pm, j) for j in range(P.dim)]
    if p == 1:
        best = 0.0
        for part in parts:
            if part.is_zero():
                continue
            lo, hi = regular_norm_bounds_l1(part)
            val = lo if lo == hi else estimate_regular_norm(part, cfg).value
            best = max(best, val)
        return best / m
    if p == INF:
        return float(sum(np.abs(part.coeffs).sum() for part in parts)) / m
    raise ValueError("gradient_regular_norm supports p = 1 and p = inf only")


def norm_pair(P, cfg=None):
    cfg = cfg or OptimizerConfig()
    return estimate_sup_norm(P, cfg), estimate_regular_norm(P, cfg)
