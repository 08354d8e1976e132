"""Primitives for the complex Banach lattices l_p^n.

Points are plain numpy complex arrays. The lattice modulus is taken
coordinatewise and every lattice norm depends only on it.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

INF = math.inf


@dataclass(frozen=True)
class SpaceSpec:
    """The space l_p^n: ``dim`` coordinates, exponent ``p`` in [1, inf]."""

    dim: int
    p: float = 1.0

    def __post_init__(self):
        p = parse_exponent(self.p)
        object.__setattr__(self, "p", p)
        if int(self.dim) != self.dim or self.dim < 1:
            raise ValueError(f"dim must be a positive integer, got {self.dim!r}")
        object.__setattr__(self, "dim", int(self.dim))

    @property
    def is_inf(self) -> bool:
        return self.p == INF

    @property
    def dual_p(self) -> float:
        if self.p == 1:
            return INF
        if self.is_inf:
            return 1.0
        return self.p / (self.p - 1.0)

    def with_dim(self, dim: int) -> "SpaceSpec":
        return SpaceSpec(dim, self.p)

    def to_json(self) -> dict:
        return {"dim": self.dim, "p": "inf" if self.is_inf else self.p}

    @classmethod
    def from_json(cls, data: dict) -> "SpaceSpec":
        return cls(int(data["dim"]), data["p"])

    def __str__(self):
        p = "inf" if self.is_inf else f"{self.p:g}"
        return f"l_{p}^{self.dim}"


def parse_exponent(p) -> float:
    if isinstance(p, str):
        if p.strip().lower() in ("inf", "infinity", "oo"):
            return INF
        p = float(p)
    p = float(p)
    if math.isnan(p) or p < 1:
        raise ValueError(f"p must lie in [1, inf], got {p!r}")
    return p


def as_vector(z, dim: int | None = None) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    if z.ndim != 1:
        raise ValueError("expected a one-dimensional vector")
    if dim is not None and z.shape[0] != dim:
        raise ValueError(f"dimension mismatch: vector has {z.shape[0]} entries, space has {dim}")
    return z


def modulus_point(z) -> np.ndarray:
    """Coordinatewise modulus ``|z| = (sqrt(x_j^2 + y_j^2))_j``."""
    return np.abs(np.asarray(z, dtype=complex))


def krivine_modulus(z, grid: int = 10_000) -> np.ndarray:
    """Grid approximation of ``sup_theta (x cos theta + y sin theta)`` per coordinate.

    Independent of :func:`modulus_point`; used to cross-check it.
    """
    z = np.asarray(z, dtype=complex)
    theta = np.linspace(0.0, 2 * np.pi, grid, endpoint=False)
    vals = np.outer(z.real, np.cos(theta)) + np.outer(z.imag, np.sin(theta))
    return vals.max(axis=1)


def lp_norm(x, p: float) -> float:
    x = np.abs(np.asarray(x))
    if x.size == 0:
        return 0.0
    if p == INF:
        return float(x.max())
    if p == 1:
        return float(x.sum())
    scale = x.max()
    if scale == 0:
        return 0.0
    return float(scale * np.sum((x / scale) ** p) ** (1.0 / p))


def p_norm(space: SpaceSpec, z) -> float:
    """Lattice norm ``||z|| = || |z| ||_p`` on ``space``."""
    z = as_vector(z, space.dim)
    return lp_norm(modulus_point(z), space.p)


def disjoint(z, w, tol: float = 1e-12) -> bool:
    z = as_vector(z)
    w = as_vector(w, z.shape[0])
    return bool(np.all(np.minimum(np.abs(z), np.abs(w)) <= tol))


def log_interpolate(x, y, theta: float) -> np.ndarray:
    """Coordinatewise weighted geometric mean ``x^theta y^(1-theta)``."""
    if not 0.0 < theta < 1.0:
        raise ValueError(f"theta must lie strictly between 0 and 1, got {theta}")
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape:
        raise ValueError("x and y must have the same length")
    if np.any(x < 0) or np.any(y < 0):
        raise ValueError("log_interpolate expects nonnegative vectors")
    # 0**t == 0 for t > 0, which numpy already does
    return x**theta * y ** (1.0 - theta)


@dataclass(frozen=True)
class Polydisc:
    center: np.ndarray
    polyradius: np.ndarray

    def __post_init__(self):
        c = as_vector(self.center)
        a = np.asarray(self.polyradius, dtype=float)
        if a.shape != c.shape:
            raise ValueError("center and polyradius must have the same length")
        if np.any(a < 0):
            raise ValueError("polyradius entries must be nonnegative")
        object.__setattr__(self, "center", c)
        object.__setattr__(self, "polyradius", a)


def polydisc_contains(d: Polydisc, z, tol: float = 0.0) -> bool:
    z = as_vector(z, d.center.shape[0])
    return bool(np.all(np.abs(z - d.center) <= d.polyradius + tol))


def vector_to_json(z) -> list:
    return [[float(c.real), float(c.imag)] for c in np.asarray(z, dtype=complex)]


def vector_from_json(data) -> np.ndarray:
    out = []
    for item in data:
        if isinstance(item, (list, tuple)):
            if len(item) != 2:
                raise ValueError(f"complex entries are [re, im] pairs, got {item!r}")
            out.append(complex(float(item[0]), float(item[1])))
        else:
            out.append(complex(float(item)))
    return np.array(out, dtype=complex)
