"""Patched monopole gauge potentials over momentum space.

Two singularity-free potentials cover the momentum sphere: the northern
one is regular at theta=0, the southern one at theta=pi, and they differ
by the gradient of the transition phase n*phi on the overlap band.  Fluxes
through triangles and tetrahedra are evaluated with the exact planar
solid-angle formula (Van Oosterom-Strackee), which keeps the quantization
dichotomy (origin inside vs outside) exact.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from math import pi
from typing import NamedTuple

import numpy as np

from .errors import PatchDomainError
from .specfun import gauss_legendre

__all__ = [
    "MomentumPoint",
    "Patch",
    "PatchSide",
    "Coupling",
    "DiracCheck",
    "gauge_potential",
    "field_strength",
    "line_integral",
    "triangle_cocycle",
    "tetrahedron_cocycle",
    "dirac_check",
    "transition_function",
    "solid_angle_triangle",
]

DEFAULT_OVERLAP = pi / 36  # 5 degrees of overlap band half-width


@dataclass(frozen=True)
class MomentumPoint:
    """Momentum-space point (p, theta, phi), atomic units.

    phi is normalized into [0, 2pi); the Cartesian view is derived and
    round-trips with the spherical one to better than 1e-13.
    """

    p: float
    theta: float
    phi: float

    def __post_init__(self):
        if not (self.p > 0):
            raise ValueError(f"radial momentum must be positive, got {self.p}")
        if not (0 <= self.theta <= pi):
            raise ValueError(f"theta must lie in [0, pi], got {self.theta}")
        object.__setattr__(self, "phi", float(self.phi) % (2 * pi))

    @classmethod
    def from_cartesian(cls, vec) -> "MomentumPoint":
        vec = np.asarray(vec, dtype=float)
        p = float(np.linalg.norm(vec))
        if p == 0.0:
            raise ValueError("zero momentum has no angular coordinates")
        theta = float(np.arccos(np.clip(vec[2] / p, -1.0, 1.0)))
        phi = float(np.arctan2(vec[1], vec[0]))
        return cls(p=p, theta=theta, phi=phi)

    @property
    def cartesian(self) -> np.ndarray:
        st = np.sin(self.theta)
        return self.p * np.array([st * np.cos(self.phi),
                                  st * np.sin(self.phi),
                                  np.cos(self.theta)])

    @property
    def unit(self) -> np.ndarray:
        return self.cartesian / self.p


class PatchSide(enum.Enum):
    N = "N"
    S = "S"


@dataclass(frozen=True)
class Patch:
    """Gauge patch tag with overlap band semantics.

    N is valid for theta < pi/2 + eps, S for theta > pi/2 - eps; both are
    valid only on the overlap band.
    """

    side: PatchSide
    eps: float = DEFAULT_OVERLAP

    def __post_init__(self):
        if not (0 < self.eps < pi / 2):
            raise ValueError(f"overlap half-width must lie in (0, pi/2), got {self.eps}")

    def contains(self, theta: float) -> bool:
        if self.side is PatchSide.N:
            return theta < pi / 2 + self.eps
        return theta > pi / 2 - self.eps

    def require(self, theta: float, what: str = "point"):
        if not self.contains(theta):
            raise PatchDomainError(
                f"{what} at theta={theta:.6f} is outside the {self.side.value} patch")


PATCH_N = Patch(PatchSide.N)
PATCH_S = Patch(PatchSide.S)


@dataclass(frozen=True)
class Coupling:
    """Charge-monopole coupling pair (e, g)."""

    e: float
    g: float

    @property
    def eg(self) -> float:
        return self.e * self.g


class DiracCheck(NamedTuple):
    quantized: bool
    n: int
    deviation: float


def dirac_check(c: Coupling) -> DiracCheck:
    """Check the quantization condition 2*e*g = integer."""
    t = 2 * c.eg
    n = round(t)
    dev = abs(t - n)
    return DiracCheck(quantized=dev < 1e-12, n=int(n), deviation=dev)


def transition_function(phi: float, n: int) -> complex:
    """Equatorial gluing phase e^{i n phi} between the two patches."""
    return complex(np.exp(1j * n * np.asarray(phi, dtype=float)))


def _phi_hat(phi: float) -> np.ndarray:
    return np.array([-np.sin(phi), np.cos(phi), 0.0])


def gauge_potential(patch: Patch, point: MomentumPoint, c: Coupling) -> np.ndarray:
    """Monopole vector potential on the requested patch, Cartesian components.

    A_N = (g/p) tan(theta/2) phi_hat is regular at theta=0;
    A_S = -(g/p) cot(theta/2) phi_hat is regular at theta=pi.
    """
    patch.require(point.theta)
    half = point.theta / 2
    if patch.side is PatchSide.N:
        if abs(point.theta - pi) < 1e-14:
            raise PatchDomainError("northern potential is singular at theta=pi")
        mag = c.g / point.p * np.tan(half)
    else:
        if point.theta < 1e-14:
            raise PatchDomainError("southern potential is singular at theta=0")
        mag = -c.g / point.p / np.tan(half)
    return mag * _phi_hat(point.phi)


def field_strength(point: MomentumPoint, c: Coupling) -> np.ndarray:
    """Monopole field B = (g/p^2) p_hat; singular only at p = 0."""
    return c.g / point.p**2 * point.unit


_PANEL_RULE = gauss_legendre(4)


def line_integral(patch: Patch, start: MomentumPoint, end: MomentumPoint,
                  c: Coupling, steps: int = 16) -> float:
    """Straight-segment integral of A . dk on one patch.

    Composite Gauss-Legendre panels along the chord; ``steps`` counts the
    panels.  The whole segment must stay inside the patch's validity region,
    and segments passing through the origin are rejected.
    """
    if steps < 8:
        raise ValueError(f"need at least 8 panels, got {steps}")
    a = start.cartesian
    b = end.cartesian
    d = b - a
    seg_len = np.linalg.norm(d)
    if seg_len == 0.0:
        return 0.0
    # closest approach of the segment to the origin
    t_star = np.clip(-np.dot(a, d) / np.dot(d, d), 0.0, 1.0)
    if np.linalg.norm(a + t_star * d) < 1e-12:
        raise ValueError("segment passes through the origin")

    total = 0.0
    edges = np.linspace(0.0, 1.0, steps + 1)
    for lo, hi in zip(edges[:-1], edges[1:]):
        ts = lo + (hi - lo) * (_PANEL_RULE.nodes + 1) / 2
        ws = _PANEL_RULE.weights * (hi - lo) / 2
        for t, w in zip(ts, ws):
            k = MomentumPoint.from_cartesian(a + t * d)
            patch.require(k.theta, "integration path")
            total += w * float(np.dot(gauge_potential(patch, k, c), d))
    return total


def solid_angle_triangle(r1, r2, r3) -> float:
    """Signed solid angle of a triangle seen from the origin.

    Van Oosterom-Strackee formula; the sign follows the right-hand rule on
    the vertex order (positive when (r2-r1) x (r3-r1) points away from the
    origin side).  Raises if the origin lies in the triangle's closure,
    where the subtended angle is undefined.
    """
    r1 = np.asarray(r1, dtype=float)
    r2 = np.asarray(r2, dtype=float)
    r3 = np.asarray(r3, dtype=float)
    n1, n2, n3 = np.linalg.norm(r1), np.linalg.norm(r2), np.linalg.norm(r3)
    if min(n1, n2, n3) < 1e-300:
        raise ValueError("a triangle vertex coincides with the origin")
    num = float(np.dot(r1, np.cross(r2, r3)))
    den = float(n1 * n2 * n3 + np.dot(r1, r2) * n3
                + np.dot(r2, r3) * n1 + np.dot(r3, r1) * n2)
    scale = n1 * n2 * n3
    if abs(num) < 1e-12 * scale and den < 1e-12 * scale:
        raise ValueError("origin lies in the triangle's closure; flux undefined")
    return 2.0 * np.arctan2(num, den)


def triangle_cocycle(p: MomentumPoint, v1, v2, c: Coupling) -> float:
    """Composition phase: e times the monopole flux through the triangle
    (p, p+v1, p+v1+v2) = e*g times its solid angle at the origin."""
    w1 = p.cartesian
    v1 = np.asarray(v1, dtype=float)
    v2 = np.asarray(v2, dtype=float)
    w2 = w1 + v1
    w3 = w2 + v2
    if np.linalg.norm(np.cross(v1, v2)) < 1e-15 * max(np.linalg.norm(v1) * np.linalg.norm(v2), 1e-300):
        return 0.0
    return c.eg * solid_angle_triangle(w1, w2, w3)


def tetrahedron_cocycle(p: MomentumPoint, v1, v2, v3, c: Coupling) -> float:
    """Associativity phase: e times the total outward monopole flux through
    the tetrahedron with vertices p, p+v1, p+v1+v2, p+v1+v2+v3.

    Equals 4*pi*e*g when the origin is enclosed and 0 otherwise; a
    degenerate (coplanar) tetrahedron carries zero flux.
    """
    w0 = p.cartesian
    v1 = np.asarray(v1, dtype=float)
    v2 = np.asarray(v2, dtype=float)
    v3 = np.asarray(v3, dtype=float)
    w1, w2, w3 = w0 + v1, w0 + v1 + v2, w0 + v1 + v2 + v3
    vol6 = float(np.dot(w1 - w0, np.cross(w2 - w0, w3 - w0)))
    scale = max(np.linalg.norm(w1 - w0) * np.linalg.norm(w2 - w0) * np.linalg.norm(w3 - w0), 1e-300)
    if abs(vol6) < 1e-14 * scale:
        return 0.0
    if vol6 < 0:
        w2, w3 = w3, w2
    # outward-oriented facets of a positively oriented tetrahedron
    facets = [(w1, w2, w3), (w0, w3, w2), (w0, w1, w3), (w0, w2, w1)]
    total = 0.0
    for a, b, d in facets:
        total += solid_angle_triangle(a, b, d)
    return c.eg * total
