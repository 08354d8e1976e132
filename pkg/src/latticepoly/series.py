"""Power series with homogeneous terms: radii, regular convergence, log-convexity."""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .lattice import SpaceSpec, as_vector, log_interpolate, modulus_point
from .norms import OptimizerConfig, regular_norms, sup_norms
from .poly import HomogeneousPolynomial, evaluate, poly_modulus, polynomial_from_json, polynomial_to_json


@dataclass(frozen=True)
class PowerSeries:
    """Truncated series ``sum_{m=0}^M P_m``; ``terms[m]`` has degree ``m``."""

    space: SpaceSpec
    terms: tuple
    provenance: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        terms = tuple(self.terms)
        for m, P in enumerate(terms):
            if P.space != self.space:
                raise ValueError(f"term of degree {m} lives on {P.space}, series on {self.space}")
            if P.degree != m:
                raise ValueError(f"term at position {m} has degree {P.degree}")
        object.__setattr__(self, "terms", terms)

    @classmethod
    def from_terms(cls, space: SpaceSpec, polys, provenance=None) -> "PowerSeries":
        """Place polynomials by degree; missing degrees become zero."""
        polys = list(polys)
        M = max((P.degree for P in polys), default=0)
        slots = [HomogeneousPolynomial.zero(space, m) for m in range(M + 1)]
        seen = set()
        for P in polys:
            if P.degree in seen:
                raise ValueError(f"two terms of degree {P.degree}")
            seen.add(P.degree)
            slots[P.degree] = P
        return cls(space, tuple(slots), provenance or {})

    @property
    def truncation(self) -> int:
        return len(self.terms) - 1

    def truncate(self, M: int) -> "PowerSeries":
        return PowerSeries(self.space, self.terms[: M + 1], self.provenance)

    def __call__(self, z):
        return sum(evaluate(P, z) for P in self.terms)

    def to_json(self) -> dict:
        out = {"space": self.space.to_json(), "terms": [polynomial_to_json(P) for P in self.terms if not P.is_zero()]}
        if self.provenance:
            out["provenance"] = self.provenance
        return out

    @classmethod
    def from_json(cls, data: dict) -> "PowerSeries":
        space = SpaceSpec.from_json(data["space"])
        polys = [polynomial_from_json(t) for t in data["terms"]]
        for P in polys:
            if P.space != space:
                raise ValueError("series term space differs from series space")
        return cls.from_terms(space, polys, data.get("provenance"))


@dataclass(frozen=True)
class RadiusReport:
    r: float
    r_reg: float
    per_degree: list  # (m, ||P_m||^(1/m), ||P_m||_r^(1/m))
    window: tuple
    undefined: bool = False

    def to_json(self) -> dict:
        return {
            "r": _finite_or_str(self.r),
            "r_reg": _finite_or_str(self.r_reg),
            "window": list(self.window),
            "undefined": self.undefined,
            "per_degree": [{"m": m, "root_sup": a, "root_reg": b} for m, a, b in self.per_degree],
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["m", "root_sup", "root_reg"])
        for row in self.per_degree:
            w.writerow([row[0], repr(row[1]), repr(row[2])])
        return buf.getvalue()


def _finite_or_str(x):
    return x if math.isfinite(x) else "inf"


def radii_many(series: list[PowerSeries], cfg: OptimizerConfig | None = None) -> list[RadiusReport]:
    """Radius reports for several series; degree by degree the norm estimates are batched."""
    cfg = cfg or OptimizerConfig()
    if not series:
        return []
    tables = [[] for _ in series]
    M_all = max(f.truncation for f in series)
    for m in range(1, M_all + 1):
        groups: dict = {}
        for i, f in enumerate(series):
            if m <= f.truncation:
                groups.setdefault(f.space, []).append(i)
        for space, idx in groups.items():
            polys = [series[i].terms[m] for i in idx]
            live = [i for i, P in zip(idx, polys) if not P.is_zero()]
            for i in idx:
                if series[i].terms[m].is_zero():
                    tables[i].append((m, 0.0, 0.0))
            if not live:
                continue
            batch = [series[i].terms[m] for i in live]
            sups = sup_norms(batch, cfg, stream=2 * m)
            regs = regular_norms(batch, cfg, stream=2 * m + 1)
            for i, s, r in zip(live, sups, regs):
                tables[i].append((m, s.value ** (1.0 / m), r.value ** (1.0 / m)))
    out = []
    for f, rows in zip(series, tables):
        rows.sort()
        out.append(_report(f, rows))
    return out


def _report(f: PowerSeries, rows) -> RadiusReport:
    M = f.truncation
    lo = math.ceil(M / 2)
    tail = [row for row in rows if lo <= row[0] <= M]
    top_sup = max((row[1] for row in tail), default=0.0)
    top_reg = max((row[2] for row in tail), default=0.0)
    undefined = top_sup == 0.0 and top_reg == 0.0
    r = math.inf if top_sup == 0 else 1.0 / top_sup
    r_reg = math.inf if top_reg == 0 else 1.0 / top_reg
    return RadiusReport(r, r_reg, rows, (lo, M), undefined)


def radii(f: PowerSeries, cfg: OptimizerConfig | None = None) -> RadiusReport:
    """Radius of convergence and of regular convergence from the upper half of the terms.

    ``limsup ||P_m||^(1/m)`` is replaced by the maximum over degrees
    ``ceil(M/2) .. M``; the full per-degree table is reported alongside.
    """
    if f.truncation < 8:
        raise ValueError("radii needs truncation M >= 8")
    return radii_many([f], cfg)[0]


class ConvergenceResult(NamedTuple):
    converges: bool | None  # None: inconclusive at this truncation
    partial_sums: np.ndarray
    ratio: float


def regular_increments(f: PowerSeries, z) -> np.ndarray:
    """``|P_m|(|z|)`` for ``m = 0..M``."""
    x = modulus_point(as_vector(z, f.space.dim))
    return np.array([0.0 if P.is_zero() else float(np.real(evaluate(poly_modulus(P), x))) for P in f.terms])


def regular_converges_at(f: PowerSeries, z, tol: float = 1e-3) -> ConvergenceResult:
    """Does ``sum_m |P_m|(|z|)`` converge? Judged from the last half of the increments.

    The tail is fitted as ``log d_m = a + b m + c log m``; the geometric ratio
    ``exp(b)`` below ``1 - tol`` counts as convergence, nondecreasing tail
    increments as divergence, anything else is inconclusive. The ``log m``
    column absorbs polynomial prefactors such as ``C(m+n-1, n-1)``, so a
    power-law tail like ``1/m`` is not mistaken for geometric decay.
    """
    d = regular_increments(f, z)
    sums = np.cumsum(d)
    M = f.truncation
    tail_m = np.arange(M - M // 2, M + 1)
    tail = d[tail_m]
    if not np.any(tail > 0):
        return ConvergenceResult(True, sums, 0.0)
    pos = tail > 0
    if pos.sum() >= 4:
        mm = tail_m[pos].astype(float)
        A = np.column_stack([np.ones_like(mm), mm, np.log(mm)])
        slope = np.linalg.lstsq(A, np.log(tail[pos]), rcond=None)[0][1]
        ratio = float(math.exp(slope))
    elif pos.sum() >= 2:
        slope = np.polyfit(tail_m[pos], np.log(tail[pos]), 1)[0]
        ratio = float(math.exp(slope))
    else:
        ratio = 0.0
    if ratio < 1.0 - tol:
        return ConvergenceResult(True, sums, ratio)
    if np.all(np.diff(tail) >= 0):
        return ConvergenceResult(False, sums, ratio)
    return ConvergenceResult(None, sums, ratio)


@dataclass
class ProbeReport:
    pairs: int = 0
    checks: int = 0
    violations: int = 0
    inconclusive: int = 0
    solidity_checks: int = 0
    solidity_violations: int = 0
    failures: list = field(default_factory=list)

    def to_json(self) -> dict:
        d = dict(self.__dict__)
        d["failures"] = [[list(map(float, a)), list(map(float, b)), t] for a, b, t in self.failures]
        return d


THETAS = tuple(k / 10 for k in range(1, 10))


def log_convexity_probe(f: PowerSeries, samples: int, seed: int = 0, scale: float = 1.0,
                        tol: float = 1e-3) -> ProbeReport:
    """Sample convergent pairs and test their weighted geometric means and solid hulls."""
    if samples < 1:
        raise ValueError("samples must be >= 1")
    rng = np.random.default_rng(seed)
    n = f.space.dim
    points = []
    attempts = 0
    while len(points) < 2 * samples and attempts < 100 * samples:
        attempts += 1
        x = scale * rng.random(n)
        if regular_converges_at(f, x, tol).converges:
            points.append(x)
    rep = ProbeReport()
    for k in range(0, len(points) - 1, 2):
        x, y = points[k], points[k + 1]
        rep.pairs += 1
        for theta in THETAS:
            rep.checks += 1
            verdict = regular_converges_at(f, log_interpolate(x, y, theta), tol).converges
            if verdict is False:
                rep.violations += 1
                rep.failures.append((x, y, theta))
            elif verdict is None:
                rep.inconclusive += 1
        for base in (x, y):
            w = base * rng.random(n)
            rep.solidity_checks += 1
            if regular_converges_at(f, w, tol).converges is False:
                rep.solidity_violations += 1
    return rep


def recenter_1d(coeffs, a: complex) -> np.ndarray:
    """Taylor coefficients about ``a`` of the one-variable polynomial ``sum c_m z^m``."""
    c = np.asarray(coeffs, dtype=complex)
    M = len(c) - 1
    out = np.zeros(M + 1, dtype=complex)
    for k in range(M + 1):
        out[k] = sum(math.comb(m, k) * c[m] * a ** (m - k) for m in range(k, M + 1))
    return out


def _sum_to_convergence(term, max_terms=10_000, eps=1e-15):
    total = 0j
    for k in range(max_terms):
        t = term(k)
        total += t
        if abs(t) < eps:
            break
    return total


def coherence_demo() -> tuple[complex, complex]:
    """``|f|_0(i/2)`` and ``|f|_{i/2}(i/2)`` for ``f(z) = 1/(1 - z)``.

    ``|f|_{z0}(z) = sum |a_k| (z - z0)^k`` with ``a_k = (1 - z0)^-(k+1)``.
    """
    z = 0.5j

    def expansion(z0):
        a = lambda k: 1.0 / (1.0 - z0) ** (k + 1)  # noqa: E731
        return _sum_to_convergence(lambda k: abs(a(k)) * (z - z0) ** k)

    return complex(expansion(0.0)), complex(expansion(0.5j))


def bohr_sandwich(report: RadiusReport, k_table: dict, degrees) -> tuple[float, float]:
    """``(min_m K_m) * r`` and ``|r|``: the first should not exceed the second."""
    k_min = min(k_table[m] for m in degrees)
    return k_min * report.r, report.r_reg


def geometric_series(space: SpaceSpec, M: int, scale: float = 1.0) -> PowerSeries:
    """``sum_m scale^m sum_{|alpha| = m} z^alpha`` truncated at degree ``M``."""
    from .poly import enumerate_multiindices

    polys = [HomogeneousPolynomial(space, m, {a: scale**m for a in enumerate_multiindices(space.dim, m)})
             for m in range(M + 1)]
    return PowerSeries(space, tuple(polys))
