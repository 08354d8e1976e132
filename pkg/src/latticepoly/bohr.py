"""Homogeneous Bohr radii ``K_m`` of l_p^n unit balls, estimated by nested search.

``K_m = chi^(-1/m)`` where ``chi = sup ||P||_r / ||P||`` over m-homogeneous
``P`` is the unconditional basis constant of the monomials; the search
reports ``chi`` as ``ratio_sup``. Any lower bound on ``chi`` gives an upper
bound on ``K_m``.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .lattice import SpaceSpec
from .norms import NonConvergenceError, OptimizerConfig, regular_norms, sup_norms
from .poly import HomogeneousPolynomial, count_multiindices, enumerate_multiindices, polynomial_to_json

SEARCH_TERMS_CAP = 120


@dataclass(frozen=True)
class BohrEstimate:
    space: SpaceSpec
    degree: int
    ratio_sup: float
    k_m: float
    witness_poly: HomogeneousPolynomial
    seed: int
    slack: float = 0.0  # search-config ratio minus final-config ratio for the winner
    search: str = "random"
    diagnostics: dict = field(default_factory=dict, compare=False)

    def to_json(self) -> dict:
        return {
            "space": self.space.to_json(),
            "m": self.degree,
            "ratio_sup": self.ratio_sup,
            "k_m": self.k_m,
            "seed": self.seed,
            "slack": self.slack,
            "search": self.search,
            "witness": polynomial_to_json(self.witness_poly),
        }

    def csv_row(self) -> dict:
        p = "inf" if self.space.is_inf else self.space.p
        return {"p": p, "n": self.space.dim, "m": self.degree, "k_m": self.k_m, "ratio_sup": self.ratio_sup,
                "seed": self.seed}


def _ratios(space, m, alphas, C, cfg, stream):
    polys = [HomogeneousPolynomial(space, m, dict(zip(alphas, row))) for row in C]
    try:
        sups = sup_norms(polys, cfg, stream=stream)
        regs = regular_norms(polys, cfg, stream=stream + 1)
    except NonConvergenceError as exc:
        raise NonConvergenceError(f"inner norm estimate failed during Bohr search on {space}, m={m}: {exc}",
                                  exc.estimate) from exc
    return np.array([r.value / s.value if s.value > 0 else 0.0 for s, r in zip(sups, regs)])


def _unit_rows(C):
    return C / np.linalg.norm(C, axis=1, keepdims=True)


def estimate_bohr_m(space: SpaceSpec, m: int, cfg: OptimizerConfig | None = None, *, batch: int = 200,
                    polish: int = 10, rounds: int = 10, radius: float = 0.25, search_starts: int = 16,
                    candidates=(), max_terms: int = SEARCH_TERMS_CAP) -> BohrEstimate:
    """Maximize ``||P||_r / ||P||`` over m-homogeneous ``P`` on ``space``.

    Random unit coefficient vectors are scored with cheap inner estimates
    (``search_starts`` starts), the best ``polish`` are refined by compass
    search with a halving radius, and the winner is re-scored with the full
    ``cfg``. ``candidates`` join the initial pool. When the monomial count
    exceeds ``max_terms`` only the candidates are scored.
    """
    cfg = cfg or OptimizerConfig()
    if m < 1:
        raise ValueError("degree must be >= 1")
    T = count_multiindices(space.dim, m)
    searchable = T <= max_terms
    if not searchable and not candidates:
        raise ValueError(f"{T} monomials on {space} at degree {m}: too many for random search; pass candidates")
    alphas = enumerate_multiindices(space.dim, m) if searchable else None
    cands = [P.embed(space.dim) if P.dim < space.dim else P for P in candidates]
    for P in cands:
        if P.space != space or P.degree != m:
            raise ValueError("candidate polynomials must match the space and degree")
    if not searchable:
        keys = sorted({a for P in cands for a in P.terms}, reverse=True)
        alphas = keys
    index = {a: i for i, a in enumerate(alphas)}
    search_cfg = cfg.with_(starts=min(search_starts, cfg.starts))
    rng = cfg.rng(101)
    pool = []
    if searchable:
        pool.append(_unit_rows(rng.standard_normal((batch, T)) + 1j * rng.standard_normal((batch, T))))
    for P in cands:
        row = np.zeros(len(alphas), dtype=complex)
        for a, c in P.terms.items():
            row[index[a]] = c
        pool.append(_unit_rows(row[None]))
    C = np.concatenate(pool)
    scores = _ratios(space, m, alphas, C, search_cfg, stream=200)
    history = {"initial_best": float(scores.max())}
    if searchable and polish > 0 and T > 1:
        order = np.argsort(-scores, kind="stable")[:polish]
        best_C, best_s = C[order].copy(), scores[order].copy()
        d = 2 * len(alphas)
        basis = np.zeros((2 * d, len(alphas)), dtype=complex)
        for k in range(len(alphas)):
            basis[4 * k, k], basis[4 * k + 1, k] = 1, -1
            basis[4 * k + 2, k], basis[4 * k + 3, k] = 1j, -1j
        rad = radius
        for rnd in range(rounds):
            trial = (best_C[:, None, :] + rad * basis[None]).reshape(-1, len(alphas))
            trial = _unit_rows(trial)
            ts = _ratios(space, m, alphas, trial, search_cfg, stream=300 + 2 * rnd).reshape(len(best_C), -1)
            pick = np.argmax(ts, axis=1)
            gain = ts[np.arange(len(best_C)), pick] > best_s
            best_C[gain] = trial.reshape(len(best_C), -1, len(alphas))[np.flatnonzero(gain), pick[gain]]
            best_s[gain] = ts[np.arange(len(best_C)), pick][gain]
            rad *= 0.5
        C = np.concatenate([C, best_C])
        scores = np.concatenate([scores, best_s])
    win = int(np.argmax(scores))
    search_ratio = float(scores[win])
    final = float(_ratios(space, m, alphas, C[win:win + 1], cfg, stream=900)[0])
    ratio = max(final, 1.0)  # ||P||_r >= ||P|| always
    witness = HomogeneousPolynomial(space, m, dict(zip(alphas, C[win])))
    history["search_best"] = search_ratio
    return BohrEstimate(space, m, ratio, ratio ** (-1.0 / m), witness, cfg.seed, search_ratio - final,
                        "random" if searchable else "candidates", history)


def bohr_grid(ps, ns, ms, cfg: OptimizerConfig | None = None, threads: int = 1, **kw) -> list[BohrEstimate]:
    """Sweep ``(p, n, m)``; winners for smaller ``n`` seed the search at larger ``n``.

    ``l_p^n`` sits inside ``l_p^(n+1)`` as a band, so carrying witnesses
    upward keeps the reported ``k_m`` monotone in ``n``. Independent
    ``(p, m)`` chains run on up to ``threads`` workers; results come back in
    sweep order whatever the thread count.
    """
    def chain(p, m):
        out, carry = [], []
        for n in sorted(ns):
            est = estimate_bohr_m(SpaceSpec(n, p), m, cfg, candidates=[P.embed(n) for P in carry], **kw)
            carry = [est.witness_poly]
            out.append(est)
        return out

    jobs = [(p, m) for p in ps for m in ms]
    if threads > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            chains = list(pool.map(lambda job: chain(*job), jobs))
    else:
        chains = [chain(*job) for job in jobs]
    return [est for c in chains for est in c]


def ckk_unit_norm_family(a: float, b: float, c: float, tol: float = 1e-12):
    """``a x^2 + b y^2 + c xy`` on l_1^2 and whether it has norm one by the Choi-Kim-Ki criterion."""
    if not (abs(a) < 1 and abs(b) < 1 and 2 < abs(c) <= 4):
        raise ValueError("need |a| < 1, |b| < 1 and 2 < |c| <= 4")
    space = SpaceSpec(2, 1)
    P = HomogeneousPolynomial(space, 2, {(2, 0): a, (0, 2): b, (1, 1): c})
    lhs = 4 * abs(c) - c * c
    rhs = 4 * (abs(a + b) - a * b)
    return abs(lhs - rhs) <= tol, P


def disc_bohr_threshold(a: float, terms: int = 1000, tol: float = 1e-9) -> float:
    """Radius where ``sum |c_k| r^k = 1`` for ``(a - z)/(1 - a z)``, namely ``1/(1 + 2a)``.

    The closed form is checked by summing the first ``terms`` coefficients.
    """
    if not 0 < a < 1:
        raise ValueError("a must lie in (0, 1)")
    r = 1.0 / (1.0 + 2.0 * a)
    k = np.arange(1, terms + 1)
    total = a + math.fsum((1 - a * a) * a ** (k - 1.0) * r**k)
    if abs(total - 1.0) > tol:
        raise ArithmeticError(f"series check failed: sum = {total!r} at r = {r!r}")
    return r


BOHR_DISC_LIMIT = 1.0 / 3.0
