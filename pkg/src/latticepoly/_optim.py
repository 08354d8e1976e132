"""Batched local maximization of ``|P(z)| / ||z||_p^m``.

Every start of every polynomial is one row; all rows advance together
through a vectorized BFGS with Armijo backtracking. Polynomials in one
batch share their exponent table and differ only in coefficients.

Parametrizations (``w`` is the free variable, ``z`` the point):

* ``p < inf``: ``z = w |w|^a`` with ``a = 2/p - 1`` for ``p <= 2`` and
  ``a = 0`` otherwise; then ``||z||_p = S^(1/p)`` with ``S = sum |w|^q``,
  ``q = 2`` for ``p <= 2`` and ``q = p`` otherwise. The objective is
  0-homogeneous in ``w`` so no constraint is needed.
* complex ``p = inf``: ``z = exp(i theta)`` (the maximum modulus principle
  puts the supremum on the torus).
* real ``p = inf``: ``z = sin(s)`` covers the box.

We minimize ``F = -2 log|P(z)| + (2m/p) log S``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .lattice import INF
from .poly import power_table

ARMIJO = 1e-4
MAX_HALVINGS = 50


@dataclass
class BatchResult:
    points: np.ndarray  # (B, S, n) complex, unit norm
    values: np.ndarray  # (B, S) |P(point)|
    converged: np.ndarray  # (B, S) bool
    valid: np.ndarray  # (B, S) bool, False for starts on the zero set of P
    iterations: int


class _Problem:
    def __init__(self, exps, coeffs, rows, p, real):
        self.exps = np.asarray(exps, dtype=np.int64)
        self.coeffs = np.asarray(coeffs, dtype=complex)  # (B, T)
        self.rows = rows  # (R,) index into coeffs
        self.p = p
        self.real = real
        self.n = self.exps.shape[1]
        self.m = int(self.exps[0].sum())
        self.maxexp = int(self.exps.max(initial=0))
        self.expm1 = np.maximum(self.exps - 1, 0)
        self.jidx = np.arange(self.n)[None, :]
        if p == INF:
            self.a, self.q = 0.0, None
        elif p <= 2:
            self.a, self.q = 2.0 / p - 1.0, 2.0
        else:
            self.a, self.q = 0.0, float(p)

    def poly_and_grad(self, z, sel):
        """P(z) and dP/dz_j for rows ``sel``.

        Rows without zero coordinates go through logarithms, which turns the
        monomial table into one matrix product; the rest use exact powers.
        """
        C = self.coeffs[self.rows[sel]]
        safe = np.all(np.abs(z) > 1e-100, axis=1)
        if safe.all():
            return self._log_route(z, C)
        P = np.empty(z.shape[0], dtype=complex)
        G = np.empty(z.shape, dtype=complex)
        if safe.any():
            P[safe], G[safe] = self._log_route(z[safe], C[safe])
        rest = ~safe
        P[rest], G[rest] = self._power_route(z[rest], C[rest])
        return P, G

    def _log_route(self, z, C):
        mono = np.exp(np.log(z) @ self.exps.T)
        cm = C * mono
        return cm.sum(axis=1), (cm @ self.exps) / z

    def _power_route(self, z, C):
        pw = power_table(z, self.maxexp)
        Q = pw[:, self.jidx, self.exps]  # (R, T, n)
        Qm = pw[:, self.jidx, self.expm1]
        pre = np.ones_like(Q)
        suf = np.ones_like(Q)
        if self.n > 1:
            pre[..., 1:] = np.cumprod(Q[..., :-1], axis=-1)
            suf[..., :-1] = np.cumprod(Q[..., :0:-1], axis=-1)[..., ::-1]
        mono = pre[..., -1] * Q[..., -1]
        P = np.einsum("rt,rt->r", C, mono)
        D = Qm * pre * suf * self.exps[None]
        G = np.einsum("rt,rtj->rj", C, D)
        return P, G

    def point(self, x):
        if self.p == INF:
            return np.exp(1j * x) if not self.real else np.sin(x).astype(complex)
        w = x[:, : self.n] + 1j * x[:, self.n:] if not self.real else x.astype(complex)
        if self.a == 0:
            return w
        return w * np.abs(w) ** self.a

    def normalize(self, x):
        if self.p == INF:
            return x
        if self.real:
            S = np.sum(np.abs(x) ** self.q, axis=1)
        else:
            w = x[:, : self.n] + 1j * x[:, self.n:]
            S = np.sum(np.abs(w) ** self.q, axis=1)
        return x / S[:, None] ** (1.0 / self.q)

    def value_grad(self, x, sel, need_grad=True):
        n, m, p = self.n, self.m, self.p
        z = self.point(x)
        P, G = self.poly_and_grad(z, sel)
        absP = np.abs(P)
        with np.errstate(divide="ignore", invalid="ignore"):
            F = -2.0 * np.log(absP)
            if p != INF:
                if self.real:
                    mag = np.abs(x)
                else:
                    w = x[:, :n] + 1j * x[:, n:]
                    mag = np.abs(w)
                S = np.sum(mag**self.q, axis=1)
                F = F + (2.0 * m / p) * np.log(S)
        F = np.where(np.isfinite(F), F, np.inf)
        if not need_grad:
            return F, None
        with np.errstate(divide="ignore", invalid="ignore"):
            grad = self._grad(x, z, G / P[:, None], S if p != INF else None, mag if p != INF else None)
        return F, np.where(np.isfinite(grad), grad, 0.0)

    def _grad(self, x, z, X, S, mag):
        """Gradient of F from ``X = d log P / dz``."""
        n, m, p = self.n, self.m, self.p
        if p == INF:
            if self.real:
                grad = -2.0 * np.real(X * np.cos(x))
            else:
                grad = -2.0 * np.real(X * 1j * z)
        else:
            a, q = self.a, self.q
            coef = 2.0 * m / p / S[:, None]
            if self.real:
                dz = (1.0 + a) * mag**a
                dS = q * mag ** (q - 2) * x if q != 2 else 2.0 * x
                grad = -2.0 * np.real(X * dz) + coef * dS
            else:
                u, v = x[:, :n], x[:, n:]
                w = u + 1j * v
                base = mag**a
                if a > 0:
                    extra = np.where(mag > 0, a * w * mag ** (a - 2.0), 0.0)
                    dzu = base + extra * u
                    dzv = 1j * base + extra * v
                else:
                    dzu = np.ones_like(w)
                    dzv = 1j * np.ones_like(w)
                gq = q * mag ** (q - 2) if q != 2 else 2.0 * np.ones_like(mag)
                gu = -2.0 * np.real(X * dzu) + coef * gq * u
                gv = -2.0 * np.real(X * dzv) + coef * gq * v
                grad = np.concatenate([gu, gv], axis=1)
        return grad


def _bfgs(prob, x0, tol, max_iter):
    R, d = x0.shape
    allrows = np.arange(R)
    x = prob.normalize(x0.copy())
    F, g = prob.value_grad(x, allrows)
    valid = np.isfinite(F)
    done = ~valid
    converged = np.zeros(R, dtype=bool)
    H = np.broadcast_to(np.eye(d), (R, d, d)).copy()
    first = np.ones(R, dtype=bool)
    stall = np.zeros(R, dtype=int)
    it = 0
    for it in range(1, max_iter + 1):
        act = np.flatnonzero(~done)
        if act.size == 0:
            break
        xa, Fa, ga, Ha = x[act], F[act], g[act], H[act]
        gnorm = np.abs(ga).max(axis=1)
        small = gnorm <= tol
        if small.any():
            converged[act[small]] = True
            done[act[small]] = True
            keep = ~small
            act, xa, Fa, ga, Ha, gnorm = act[keep], xa[keep], Fa[keep], ga[keep], Ha[keep], gnorm[keep]
            if act.size == 0:
                continue
        step = -np.einsum("rij,rj->ri", Ha, ga)
        slope = np.sum(step * ga, axis=1)
        bad = ~(slope < 0)
        if bad.any():
            Ha[bad] = np.eye(d)
            step[bad] = -ga[bad]
            slope[bad] = -np.sum(ga[bad] ** 2, axis=1)
        alpha = np.ones(act.size)
        fresh = first[act] | bad
        smax = np.abs(step).max(axis=1)
        alpha[fresh] = np.minimum(1.0, 0.5 / np.maximum(smax[fresh], 1e-300))
        pending = np.arange(act.size)
        Fn = np.full(act.size, np.inf)
        xn = xa.copy()
        for _ in range(MAX_HALVINGS):
            if pending.size == 0:
                break
            trial = prob.normalize(xa[pending] + alpha[pending, None] * step[pending])
            Ft, _ = prob.value_grad(trial, act[pending], need_grad=False)
            ok = Ft <= Fa[pending] + ARMIJO * alpha[pending] * slope[pending]
            idx = pending[ok]
            Fn[idx] = Ft[ok]
            xn[idx] = trial[ok]
            pending = pending[~ok]
            alpha[pending] *= 0.5
        failed = np.zeros(act.size, dtype=bool)
        failed[pending] = True
        if failed.any():
            # no descent to working precision: stationary as far as we can tell
            fr = act[failed]
            converged[fr] = gnorm[failed] <= max(1e-6, np.sqrt(tol))
            done[fr] = True
        moved = ~failed
        if not moved.any():
            continue
        am = act[moved]
        Fnew, gnew = prob.value_grad(xn[moved], am)
        s = xn[moved] - xa[moved]
        y = gnew - ga[moved]
        sy = np.sum(s * y, axis=1)
        Hm = Ha[moved]
        f0 = first[am]
        if f0.any():
            yy = np.sum(y[f0] ** 2, axis=1)
            scale = np.where((sy[f0] > 0) & (yy > 0), sy[f0] / np.maximum(yy, 1e-300), 1.0)
            Hm[f0] = np.eye(d)[None] * scale[:, None, None]
        upd = sy > 1e-12 * np.sqrt(np.sum(s * s, axis=1) * np.sum(y * y, axis=1))
        if upd.any():
            rho = 1.0 / sy[upd]
            Hu, su, yu = Hm[upd], s[upd], y[upd]
            Hy = np.einsum("rij,rj->ri", Hu, yu)
            yHy = np.sum(yu * Hy, axis=1)
            Hu = (Hu - rho[:, None, None] * (Hy[:, :, None] * su[:, None, :] + su[:, :, None] * Hy[:, None, :])
                  + (rho**2 * yHy + rho)[:, None, None] * su[:, :, None] * su[:, None, :])
            Hm[upd] = Hu
        H[am] = Hm
        first[am] = False
        dF = Fa[moved] - Fnew
        tiny = dF <= 1e-15 * (1.0 + np.abs(Fnew))
        stall[am] = np.where(tiny, stall[am] + 1, 0)
        x[am], F[am], g[am] = xn[moved], Fnew, gnew
        st = am[stall[am] >= 3]
        if st.size:
            converged[st] = True
            done[st] = True
    return x, F, converged, valid, it


def start_points(n, p, real, positive, count, rng, structured=True):
    """Initial parameters for ``count`` starts of one polynomial."""
    d = n if (real or p == INF) else 2 * n
    xs = []
    if structured:
        struct = []
        if p == INF:
            struct.append(np.full(n, np.pi / 2) if real else np.zeros(n))
            if real:
                for j in range(n):
                    e = np.zeros(n)
                    e[j] = np.pi / 2
                    struct.append(e)
        else:
            struct.append(np.ones(n))
            for j in range(n):
                e = np.zeros(n)
                e[j] = 1.0
                struct.append(e)
            if not real:
                struct = [np.concatenate([s, np.zeros(n)]) for s in struct]
        xs.extend(struct[: max(1, count // 2)])
    while len(xs) < count:
        if p == INF:
            if real:
                lo = 0.0 if positive else -np.pi
                xs.append(rng.uniform(lo, np.pi, n))
            else:
                xs.append(rng.uniform(0, 2 * np.pi, n))
        else:
            v = rng.standard_normal(d)
            if positive:
                v = np.abs(v)
            xs.append(v)
    return np.array(xs[:count], dtype=float).reshape(count, d)


def maximize_batch(exps, coeffs, p, *, real=False, positive=False, starts=16, rng=None,
                   tol=1e-10, max_iter=500, x0=None):
    """Local maxima of ``|P_b(z)|`` on the unit sphere of l_p^n, many starts per polynomial.

    ``coeffs`` has shape (B, T). Returns a :class:`BatchResult`.
    """
    exps = np.asarray(exps, dtype=np.int64)
    coeffs = np.atleast_2d(np.asarray(coeffs, dtype=complex))
    B = coeffs.shape[0]
    n = exps.shape[1]
    rng = np.random.default_rng(0) if rng is None else rng
    if x0 is None:
        x0 = np.concatenate([start_points(n, p, real, positive, starts, rng) for _ in range(B)])
    S = x0.shape[0] // B
    rows = np.repeat(np.arange(B), S)
    prob = _Problem(exps, coeffs, rows, p, real)
    x, F, conv, valid, it = _bfgs(prob, x0, tol, max_iter)
    z = prob.point(x)
    if real:
        z = z.real.astype(complex)
    if p == INF:
        norms = np.abs(z).max(axis=1)
    else:
        norms = np.sum(np.abs(z) ** p, axis=1) ** (1.0 / p)
    with np.errstate(invalid="ignore", divide="ignore"):
        z = z / norms[:, None]
    z = np.where(np.isfinite(z), z, 0)
    P, _ = prob.poly_and_grad(z, np.arange(len(rows)))
    vals = np.abs(P)
    vals = np.where(valid, vals, -np.inf)
    return BatchResult(z.reshape(B, S, n), vals.reshape(B, S), conv.reshape(B, S), valid.reshape(B, S), it)
