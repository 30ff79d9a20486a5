"""Validated special functions and quadrature used by every other module.

Polynomials are evaluated by ascending three-term recurrences, which are
stable over the degree range needed here (n up to ~50).  Gauss-Legendre
nodes come from numpy's Golub-Welsch implementation and are wrapped in a
self-checking :class:`QuadratureRule`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "QuadratureRule",
    "gauss_legendre",
    "jacobi_poly",
    "laguerre_poly",
    "fornberg_weights",
    "legendre_q_table",
]


@dataclass(frozen=True)
class QuadratureRule:
    """Gauss-Legendre nodes and weights on (-1, 1).

    Exact for polynomials of degree <= 2*order - 1; weights are positive
    and sum to 2.
    """

    nodes: np.ndarray
    weights: np.ndarray
    order: int

    def __post_init__(self):
        if self.order < 1:
            raise ValueError(f"quadrature order must be >= 1, got {self.order}")
        if len(self.nodes) != self.order or len(self.weights) != self.order:
            raise ValueError("nodes/weights length must equal order")
        if np.any(self.weights <= 0):
            raise ValueError("Gauss-Legendre weights must be positive")
        if abs(self.weights.sum() - 2.0) > 1e-13:
            raise ValueError("Gauss-Legendre weights must sum to 2")

    def integrate(self, f) -> float:
        return float(np.sum(self.weights * f(self.nodes)))


def gauss_legendre(order: int) -> QuadratureRule:
    """Gauss-Legendre rule of the given order on (-1, 1)."""
    if not isinstance(order, (int, np.integer)):
        raise ValueError(f"order must be an integer, got {order!r}")
    if order < 1:
        raise ValueError(f"order must be >= 1, got {order}")
    nodes, weights = np.polynomial.legendre.leggauss(int(order))
    return QuadratureRule(nodes=nodes, weights=weights, order=int(order))


def _check_degree(n, name: str) -> int:
    if not isinstance(n, (int, np.integer)):
        raise ValueError(f"{name} must be a non-negative integer, got {n!r}")
    if n < 0:
        raise ValueError(f"{name} must be >= 0, got {n}")
    return int(n)


def _binom_general(a: float, k: int) -> float:
    """Generalized binomial coefficient C(a, k) for real a, integer k >= 0."""
    out = 1.0
    for i in range(1, k + 1):
        out *= (a - k + i) / i
    return out


def _jacobi_series(n: int, alpha: float, beta: float, z):
    """Explicit finite-sum Jacobi polynomial; valid for any real alpha, beta."""
    z = np.asarray(z, dtype=float)
    out = np.zeros_like(z)
    for s in range(n + 1):
        c = _binom_general(n + alpha, s) * _binom_general(n + beta, n - s)
        out = out + c * ((z - 1) / 2) ** (n - s) * ((z + 1) / 2) ** s
    return out


def jacobi_poly(n: int, alpha: float, beta: float, z):
    """Jacobi polynomial P_n^(alpha,beta)(z) by ascending recurrence.

    Parameters below -1 make intermediate recurrence denominators vanish for
    some degrees; those cases fall back to the explicit finite sum, which is
    defined for any real parameters.  Accepts scalar or ndarray ``z``.
    """
    n = _check_degree(n, "n")
    if not (np.isfinite(alpha) and np.isfinite(beta)):
        raise ValueError("alpha and beta must be finite")
    z_arr = np.asarray(z, dtype=float)
    scalar = z_arr.ndim == 0
    z_arr = np.atleast_1d(z_arr)

    # the recurrence divides by 2k(k+a+b)(2k+a+b-2); bail out to the series
    # whenever any of those factors vanishes on the way up
    degenerate = any(
        abs(2 * k * (k + alpha + beta) * (2 * k + alpha + beta - 2)) < 1e-12
        for k in range(2, n + 1)
    )
    if degenerate:
        out = _jacobi_series(n, alpha, beta, z_arr)
        return float(out[0]) if scalar else out

    if n == 0:
        out = np.ones_like(z_arr)
    elif n == 1:
        out = (alpha + 1) + (alpha + beta + 2) * (z_arr - 1) / 2
    else:
        p0 = np.ones_like(z_arr)
        p1 = (alpha + 1) + (alpha + beta + 2) * (z_arr - 1) / 2
        for k in range(2, n + 1):
            c1 = 2 * k * (k + alpha + beta) * (2 * k + alpha + beta - 2)
            c2 = (2 * k + alpha + beta - 1) * (
                (2 * k + alpha + beta) * (2 * k + alpha + beta - 2) * z_arr
                + alpha * alpha - beta * beta
            )
            c3 = 2 * (k + alpha - 1) * (k + beta - 1) * (2 * k + alpha + beta)
            p0, p1 = p1, (c2 * p1 - c3 * p0) / c1
        out = p1
    return float(out[0]) if scalar else out


def laguerre_poly(v: int, a: float, x):
    """Generalized Laguerre polynomial L_v^a(x) by ascending recurrence.

    Accepts scalar or ndarray ``x``; ``a`` may be any real > -1 for the
    orthogonality range, other finite values evaluate the same recurrence.
    """
    v = _check_degree(v, "v")
    if not np.isfinite(a):
        raise ValueError("a must be finite")
    x_arr = np.asarray(x, dtype=float)
    scalar = x_arr.ndim == 0
    x_arr = np.atleast_1d(x_arr)
    if v == 0:
        out = np.ones_like(x_arr)
    elif v == 1:
        out = 1 + a - x_arr
    else:
        p0 = np.ones_like(x_arr)
        p1 = 1 + a - x_arr
        for k in range(1, v):
            p0, p1 = p1, ((2 * k + 1 + a - x_arr) * p1 - (k + a) * p0) / (k + 1)
        out = p1
    return float(out[0]) if scalar else out


def fornberg_weights(x0: float, x: np.ndarray, max_order: int) -> np.ndarray:
    """Finite-difference weights on arbitrary nodes (Fornberg's algorithm).

    Returns an array C of shape (len(x), max_order + 1): column k holds the
    weights approximating the k-th derivative at x0 from samples at x.
    """
    x = np.asarray(x, dtype=float)
    n = len(x)
    C = np.zeros((n, max_order + 1))
    c1 = 1.0
    c4 = x[0] - x0
    C[0, 0] = 1.0
    for i in range(1, n):
        mn = min(i, max_order)
        c2 = 1.0
        c5 = c4
        c4 = x[i] - x0
        for j in range(i):
            c3 = x[i] - x[j]
            c2 *= c3
            if j == i - 1:
                for k in range(mn, 0, -1):
                    C[i, k] = c1 * (k * C[i - 1, k - 1] - c5 * C[i - 1, k]) / c2
                C[i, 0] = -c1 * c5 * C[i - 1, 0] / c2
            for k in range(mn, 0, -1):
                C[j, k] = (c4 * C[j, k] - k * C[j, k - 1]) / c3
            C[j, 0] = c4 * C[j, 0] / c3
        c1 = c2
    return C


def legendre_q_table(lmax: int, z: np.ndarray, z_switch: float = 1.02,
                     tail: int = 110) -> np.ndarray:
    """Legendre functions of the second kind Q_0..Q_lmax at z > 1.

    Upward recurrence is used near z = 1 where it is stable; elsewhere the
    minimal solution is recovered by Miller-style downward recurrence
    normalized against Q_0 = log1p(2/(z-1))/2.  Accurate to ~1e-12 relative
    over z in (1 + 1e-9, 1e9) for lmax <= 64.
    """
    lmax = _check_degree(lmax, "lmax")
    z = np.asarray(z, dtype=float)
    if np.any(z <= 1.0):
        raise ValueError("legendre_q_table requires z > 1")
    Q = np.zeros((lmax + 1,) + z.shape)
    q0 = 0.5 * np.log1p(2.0 / (z - 1.0))
    Q[0] = q0
    if lmax == 0:
        return Q
    up = z <= z_switch
    if np.any(up):
        zu = z[up]
        qm = q0[up]
        qc = zu * qm - 1.0
        Q[1][up] = qc
        for n in range(1, lmax):
            qm, qc = qc, ((2 * n + 1) * zu * qc - n * qm) / (n + 1)
            Q[n + 1][up] = qc
    dn = ~up
    if np.any(dn):
        zd = z[dn]
        qp = np.zeros_like(zd)
        qc = np.ones_like(zd)
        store: dict[int, np.ndarray] = {}
        for n in range(lmax + tail, 0, -1):
            qm = ((2 * n + 1) * zd * qc - (n + 1) * qp) / n
            qp, qc = qc, qm
            if n - 1 <= lmax:
                store[n - 1] = qc.copy()
            big = np.abs(qc) > 1e250
            if np.any(big):
                qc[big] *= 1e-250
                qp[big] *= 1e-250
                for arr in store.values():
                    arr[big] *= 1e-250
        norm = q0[dn] / store[0]
        for k in range(lmax + 1):
            Q[k][dn] = store[k] * norm
    return Q
