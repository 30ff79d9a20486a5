"""Independent brute-force oracles kept separate from the library code paths.

Everything here is deliberately slow and literal: explicit finite sums,
factorial formulas, and raw quadrature.  Tests compare the production
recurrence/closed-form implementations against these.
"""

import numpy as np
from math import lgamma, exp

from scipy.special import lpmv


def binom_general(a, k):
    out = 1.0
    for i in range(1, k + 1):
        out *= (a - k + i) / i
    return out


def jacobi_explicit(n, alpha, beta, z, with_scale=False):
    """P_n^(alpha,beta)(z) as the explicit binomial double sum.

    With ``with_scale`` also returns the sum of absolute term magnitudes,
    which bounds the cancellation error of this oracle itself.
    """
    tot = 0.0
    scale = 0.0
    for s in range(n + 1):
        term = (binom_general(n + alpha, s) * binom_general(n + beta, n - s)
                * ((z - 1) / 2) ** (n - s) * ((z + 1) / 2) ** s)
        tot += term
        scale += abs(term)
    return (tot, scale) if with_scale else tot


def laguerre_series(v, a, x, with_scale=False):
    """L_v^a(x) as the explicit alternating sum."""
    from math import factorial
    terms = [(-1) ** k * binom_general(v + a, v - k) * x**k / factorial(k)
             for k in range(v + 1)]
    tot = sum(terms)
    return (tot, sum(abs(t) for t in terms)) if with_scale else tot


def wigner_d_factorial(l2, ma2, mb2, beta):
    """Wigner little-d via the explicit factorial sum (doubled integers)."""
    jpa = (l2 + ma2) // 2
    jma = (l2 - ma2) // 2
    jpb = (l2 + mb2) // 2
    jmb = (l2 - mb2) // 2
    kmin = max(0, (mb2 - ma2) // 2)
    kmax = min(jpb, jma)
    pref = 0.5 * (lgamma(jpa + 1) + lgamma(jma + 1) + lgamma(jpb + 1) + lgamma(jmb + 1))
    c, s = np.cos(beta / 2), np.sin(beta / 2)
    tot = 0.0
    for k in range(kmin, kmax + 1):
        pc = jpb + jma - 2 * k
        ps = (ma2 - mb2) // 2 + 2 * k
        den = (lgamma(jpb - k + 1) + lgamma(k + 1) + lgamma(jma - k + 1)
               + lgamma((ma2 - mb2) // 2 + k + 1))
        tot += (-1.0) ** ((ma2 - mb2) // 2 + k) * exp(pref - den) * c**pc * s**ps
    return tot


def ylm_condon_shortley(l, m, theta, phi):
    """Standard spherical harmonic with Condon-Shortley phase, via lpmv."""
    am = abs(m)
    norm = np.sqrt((2 * l + 1) / (4 * np.pi) * exp(lgamma(l - am + 1) - lgamma(l + am + 1)))
    val = norm * lpmv(am, l, np.cos(theta)) * np.exp(1j * am * np.asarray(phi))
    if m < 0:
        val = (-1) ** am * np.conj(val)
    return val


def curl_central(field, point, step=1e-4):
    """Central-difference curl of a 3-vector field at a Cartesian point."""
    point = np.asarray(point, dtype=float)
    J = np.zeros((3, 3))
    for j in range(3):
        dp = np.zeros(3)
        dp[j] = step
        J[:, j] = (field(point + dp) - field(point - dp)) / (2 * step)
    return np.array([J[2, 1] - J[1, 2], J[0, 2] - J[2, 0], J[1, 0] - J[0, 1]])


_LEGGAUSS_CACHE = {}


def legendre_q_quadrature(l, z, n=800):
    """Q_l(z) by Neumann's integral, brute quadrature."""
    if n not in _LEGGAUSS_CACHE:
        _LEGGAUSS_CACHE[n] = np.polynomial.legendre.leggauss(n)
    x, w = _LEGGAUSS_CACHE[n]
    from numpy.polynomial.legendre import legval
    c = np.zeros(l + 1)
    c[l] = 1.0
    return 0.5 * np.sum(w * legval(x, c) / (z - x))


def solid_angle_quadrature(v1, v2, v3, n=300):
    """Flux of the unit-monopole field through a flat triangle, by quadrature."""
    x, w = np.polynomial.legendre.leggauss(n)
    u = (x + 1) / 2
    wu = w / 2
    nrm = np.cross(v2 - v1, v3 - v1)
    A, B = np.meshgrid(u, u, indexing="ij")
    WA, WB = np.meshgrid(wu, wu, indexing="ij")
    a = A
    b = B * (1 - A)
    jac = (1 - A)
    pts = (v1[None, None, :] + a[..., None] * (v2 - v1)[None, None, :]
           + b[..., None] * (v3 - v1)[None, None, :])
    r = np.linalg.norm(pts, axis=-1)
    integ = np.sum(pts * nrm[None, None, :], axis=-1) / r**3
    return float(np.sum(WA * WB * jac * integ))
