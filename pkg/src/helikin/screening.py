"""Berry-phase and overlap form factors, equator crossings, screened kernels.

Form factors are spinor overlaps of local bundle sections and depend only
on momentum directions.  A straight transport path that crosses the
equator is split at the crossing point k_E, where the patch label flips
and the azimuthal transition phase enters.

Kernel evaluation pairs the hemisphere-assigned form factors with the
single global (northern-gauge) harmonic basis, which requires folding the
equator transition function e^{-i n phi} into southern-patch arguments;
with that factor in place the assembled kernel is continuous across the
seam, axially covariant (so m is conserved), and Hermitian.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from math import pi
from typing import Callable, Optional

import numpy as np

from .basis import AngularGrid, MonopoleIndex, monopole_harmonic
from .errors import ConvergenceError
from .gauge import PATCH_N, PATCH_S, Coupling, MomentumPoint, Patch, PatchSide, line_integral
from .hopf import section

__all__ = [
    "FormFactor",
    "FormFactorKind",
    "PotentialSpec",
    "PotentialKind",
    "hemisphere",
    "overlap_form_factor",
    "berry_phase_form_factor",
    "equator_crossing",
    "transition_phase",
    "cross_patch_form_factor",
    "screening_factor",
    "screened_kernel",
    "partial_wave_matrix_element",
]

SECTION_COUPLING = Coupling(e=1.0, g=0.5)  # minimal helicity sector mu = +1/2


class FormFactorKind(enum.Enum):
    OVERLAP = "overlap"
    PHASE_INTEGRAL = "phase_integral"
    CROSS_PATCH = "cross_patch"


@dataclass(frozen=True)
class FormFactor:
    """Screening weight with provenance tag.

    Overlap values have modulus <= 1; phase-integral values are unimodular.
    """

    value: complex
    kind: FormFactorKind

    def __post_init__(self):
        mod = abs(self.value)
        if self.kind is FormFactorKind.OVERLAP and mod > 1 + 1e-12:
            raise ValueError(f"overlap form factor must have modulus <= 1, got {mod}")
        if self.kind is FormFactorKind.PHASE_INTEGRAL and abs(mod - 1) > 1e-10:
            raise ValueError(f"phase-integral form factor must be unimodular, got {mod}")


class PotentialKind(enum.Enum):
    HARMONIC_OSCILLATOR = "harmonic_oscillator"
    COULOMB = "coulomb"


@dataclass(frozen=True)
class PotentialSpec:
    """External potential described by its Fourier transform U(q).

    ``fourier`` maps |q| to the real, even Fourier amplitude.  The harmonic
    oscillator has no pointwise Fourier kernel (its transform is
    distributional) and is handled analytically by the spectra module.
    """

    kind: PotentialKind
    strength: float
    fourier: Optional[Callable[[float], float]] = None

    @classmethod
    def coulomb(cls, Z: float) -> "PotentialSpec":
        if Z <= 0:
            raise ValueError(f"Z must be positive, got {Z}")
        return cls(kind=PotentialKind.COULOMB, strength=Z,
                   fourier=lambda q: -Z / (2 * pi**2 * q * q))

    @classmethod
    def harmonic_oscillator(cls) -> "PotentialSpec":
        return cls(kind=PotentialKind.HARMONIC_OSCILLATOR, strength=1.0, fourier=None)


def hemisphere(point: MomentumPoint) -> Patch:
    """Deterministic patch assignment: theta <= pi/2 is northern."""
    return PATCH_N if point.theta <= pi / 2 else PATCH_S


def overlap_form_factor(patch: Patch, p: MomentumPoint, q: MomentumPoint) -> FormFactor:
    """Section-spinor overlap <z(p)|z(q)> on a single patch."""
    zp = section(patch, p.theta, p.phi)
    zq = section(patch, q.theta, q.phi)
    val = complex(np.conj(zp.vec) @ zq.vec)
    return FormFactor(value=val, kind=FormFactorKind.OVERLAP)


def berry_phase_form_factor(patch: Patch, p: MomentumPoint, q: MomentumPoint,
                            steps: int = 16) -> FormFactor:
    """Unimodular transported phase exp(i * integral of A . dk) from p to q.

    The straight path must stay on the patch.  For small separations the
    phase agrees with arg(overlap_form_factor(patch, p, q)) to O(h^2); at
    finite separation the two differ in modulus only (the overlap shrinks,
    the transported phase stays on the unit circle).
    """
    phase = line_integral(patch, p, q, SECTION_COUPLING, steps=steps)
    return FormFactor(value=complex(np.exp(1j * phase)), kind=FormFactorKind.PHASE_INTEGRAL)


def equator_crossing(p: MomentumPoint, q: MomentumPoint) -> MomentumPoint:
    """Crossing of the straight segment [p, q] with the equatorial plane.

    k_E = (q p_z - p q_z) / (p_z - q_z), which lies on the segment whenever
    p_z and q_z have strictly opposite signs (the z-components cancel
    exactly in floating point).  A crossing through the origin leaves the
    angles undefined and is rejected.
    """
    pv, qv = p.cartesian, q.cartesian
    pz, qz = pv[2], qv[2]
    if not (pz * qz < 0):
        raise ValueError("segment does not cross the equator (p_z * q_z >= 0)")
    k = (qv * pz - pv * qz) / (pz - qz)
    if np.linalg.norm(k) < 1e-12 * max(p.p, q.p):
        raise ValueError("equator crossing at the origin; angles undefined")
    return MomentumPoint.from_cartesian(k)


def transition_phase(p: MomentumPoint, q: MomentumPoint) -> float:
    """Azimuth of the equator crossing, atan2(k_y, k_x) of k_E."""
    k = equator_crossing(p, q).cartesian
    return float(np.arctan2(k[1], k[0]))


def _closed_overlap_n(tha, pha, thb, phb):
    """F_N(a,b) = cos cos + sin sin e^{i(phi_b - phi_a)} (vectorized)."""
    return (np.cos(tha / 2) * np.cos(thb / 2)
            + np.sin(tha / 2) * np.sin(thb / 2) * np.exp(1j * (phb - pha)))


def _closed_overlap_s(tha, pha, thb, phb):
    """F_S(a,b) = cos cos e^{i(phi_a - phi_b)} + sin sin (vectorized)."""
    return (np.cos(tha / 2) * np.cos(thb / 2) * np.exp(1j * (pha - phb))
            + np.sin(tha / 2) * np.sin(thb / 2))


def _raw_cross_ns(p: MomentumPoint, q: MomentumPoint) -> complex:
    kE = equator_crossing(p, q)
    phiE = float(np.arctan2(kE.cartesian[1], kE.cartesian[0]))
    fn = _closed_overlap_n(p.theta, p.phi, pi / 2, phiE)
    fs = _closed_overlap_s(pi / 2, phiE, q.theta, q.phi)
    return complex(fn * np.exp(1j * phiE) * fs)


def cross_patch_form_factor(p: MomentumPoint, q: MomentumPoint,
                            gauge_aligned: bool = True) -> FormFactor:
    """Composed form factor for a transport path that changes hemisphere.

    F_NS(p, q) = F_N(p, k_E) e^{i phi_E} F_S(k_E, q) for p northern and q
    southern, and F_SN(p, q) = conj(F_NS(q, p)) for the reverse order.
    With ``gauge_aligned`` (default) the equator transition function is
    folded onto the southern argument, expressing the value in the global
    northern gauge; the aligned composition tends to 1 as p and q pinch
    together across the equator.
    """
    side_p = hemisphere(p).side
    side_q = hemisphere(q).side
    if side_p is side_q:
        raise ValueError("cross-patch form factor needs one northern and one southern point")
    if side_p is PatchSide.N:
        val = _raw_cross_ns(p, q)
        if gauge_aligned:
            val *= np.exp(-1j * q.phi)
    else:
        val = np.conj(_raw_cross_ns(q, p))
        if gauge_aligned:
            val *= np.exp(1j * p.phi)
    return FormFactor(value=complex(val), kind=FormFactorKind.CROSS_PATCH)


def screening_factor(p: MomentumPoint, q: MomentumPoint, mu: float) -> complex:
    """Helicity screening factor in the global northern gauge.

    1 for mu = 0; for mu = +1/2 the hemisphere-resolved overlap with the
    transition function e^{-i n phi} absorbed on southern arguments; the
    mu = -1/2 value is the complex conjugate (dual bundle).
    """
    if mu == 0:
        return 1.0 + 0j
    if abs(mu) != 0.5:
        raise ValueError(f"mu must be one of 0, +1/2, -1/2, got {mu}")
    side_p = hemisphere(p).side
    side_q = hemisphere(q).side
    if side_p is side_q:
        if side_p is PatchSide.N:
            val = complex(_closed_overlap_n(p.theta, p.phi, q.theta, q.phi))
        else:
            val = complex(np.exp(1j * p.phi)
                          * _closed_overlap_s(p.theta, p.phi, q.theta, q.phi)
                          * np.exp(-1j * q.phi))
    else:
        val = cross_patch_form_factor(p, q, gauge_aligned=True).value
    return val if mu > 0 else np.conj(val)


def screened_kernel(p: MomentumPoint, q: MomentumPoint, pot: PotentialSpec,
                    mu: float = 0.0) -> complex:
    """Effective interaction U(p - q) times the helicity screening factor."""
    if pot.fourier is None:
        raise ValueError(f"potential kind {pot.kind.value} has no Fourier kernel")
    transfer = float(np.linalg.norm(p.cartesian - q.cartesian))
    if transfer < 1e-12:
        raise ValueError("kernel is singular at p = q; use the solver's subtraction")
    return pot.fourier(transfer) * screening_factor(p, q, mu)


def screening_factor_grid(mu2: int, theta_p, theta_q, dphi) -> np.ndarray:
    """Vectorized screening factor over direction pairs.

    Arguments broadcast; ``dphi`` is phi_q - phi_p (the factor is axially
    invariant, so only the difference enters).  Used by the spectral
    solvers to build angular tensors.
    """
    theta_p, theta_q, dphi = np.broadcast_arrays(
        np.asarray(theta_p, dtype=float),
        np.asarray(theta_q, dtype=float),
        np.asarray(dphi, dtype=float))
    if mu2 == 0:
        return np.ones(theta_p.shape, dtype=complex)
    if mu2 not in (1, -1):
        raise ValueError(f"mu2 must be one of 0, +1, -1, got {mu2}")
    out = np.empty(theta_p.shape, dtype=complex)
    cp, sp = np.cos(theta_p / 2), np.sin(theta_p / 2)
    cq, sq = np.cos(theta_q / 2), np.sin(theta_q / 2)
    eid = np.exp(1j * dphi)
    north_p = theta_p <= pi / 2
    north_q = theta_q <= pi / 2

    m_nn = north_p & north_q
    out[m_nn] = (cp * cq + sp * sq * eid)[m_nn]

    m_ss = ~north_p & ~north_q
    out[m_ss] = (np.conj(eid) * (cp * cq * np.conj(eid) + sp * sq))[m_ss]

    rt2 = np.sqrt(0.5)

    m_ns = north_p & ~north_q
    if np.any(m_ns):
        a, b, d = theta_p[m_ns], theta_q[m_ns], dphi[m_ns]
        # crossing direction for unit vectors with phi_p = 0, phi_q = d
        kx = np.sin(b) * np.cos(d) * np.cos(a) - np.sin(a) * np.cos(b)
        ky = np.sin(b) * np.sin(d) * np.cos(a)
        phiE = np.arctan2(ky, kx)
        fn = np.cos(a / 2) * rt2 + np.sin(a / 2) * rt2 * np.exp(1j * phiE)
        fs = rt2 * np.cos(b / 2) * np.exp(1j * (phiE - d)) + rt2 * np.sin(b / 2)
        out[m_ns] = fn * np.exp(1j * phiE) * fs * np.exp(-1j * d)

    m_sn = ~north_p & north_q
    if np.any(m_sn):
        a, b, d = theta_p[m_sn], theta_q[m_sn], dphi[m_sn]
        # conj of the NS value with the roles of p and q swapped
        kx = np.sin(a) * np.cos(-d) * np.cos(b) - np.sin(b) * np.cos(a)
        ky = np.sin(a) * np.sin(-d) * np.cos(b)
        phiE = np.arctan2(ky, kx)
        fn = np.cos(b / 2) * rt2 + np.sin(b / 2) * rt2 * np.exp(1j * phiE)
        fs = rt2 * np.cos(a / 2) * np.exp(1j * (phiE + d)) + rt2 * np.sin(a / 2)
        out[m_sn] = np.conj(fn * np.exp(1j * phiE) * fs * np.exp(1j * d))

    return out if mu2 > 0 else np.conj(out)


def _matrix_element_on_grid(row: MonopoleIndex, col: MonopoleIndex, p: float,
                            q: float, pot: PotentialSpec, grid: AngularGrid) -> complex:
    theta = grid.theta_nodes
    phi = grid.phi_nodes
    TH, PH = np.meshgrid(theta, phi, indexing="ij")
    W = np.outer(grid.cos_weights, np.full(grid.n_phi, grid.phi_weight))
    th_f, ph_f, w_f = TH.ravel(), PH.ravel(), W.ravel()

    y_row = monopole_harmonic(row, th_f, ph_f)
    y_col = monopole_harmonic(col, th_f, ph_f)

    st_p, ct_p = np.sin(th_f)[:, None], np.cos(th_f)[:, None]
    st_q, ct_q = np.sin(th_f)[None, :], np.cos(th_f)[None, :]
    cos_gamma = ct_p * ct_q + st_p * st_q * np.cos(ph_f[None, :] - ph_f[:, None])
    transfer = np.sqrt(np.maximum(p * p + q * q - 2 * p * q * cos_gamma, 0.0))
    if np.any(transfer < 1e-12):
        raise ValueError("kernel is singular on the quadrature grid (p = q forward direction)")
    try:
        U = np.asarray(pot.fourier(transfer), dtype=float)
        if U.shape != transfer.shape:
            raise TypeError
    except (TypeError, ValueError):
        U = np.vectorize(pot.fourier)(transfer)
    F = screening_factor_grid(row.mu2, th_f[:, None], th_f[None, :],
                              ph_f[None, :] - ph_f[:, None])
    integrand = (np.conj(y_row) * w_f)[:, None] * U * F * (y_col * w_f)[None, :]
    return complex(integrand.sum())


def partial_wave_matrix_element(row: MonopoleIndex, col: MonopoleIndex, p: float,
                                q: float, pot: PotentialSpec, grid: AngularGrid,
                                verify: bool = False) -> complex:
    """Screened-potential matrix element between monopole harmonics.

    Double angular quadrature of conj(Y_row(p_hat)) U(|p - q|) F Y_col(q_hat)
    over both direction spheres at fixed radial magnitudes p, q.  Both
    indices must share the helicity sector.  With ``verify`` the element is
    recomputed on a half-resolution grid and a relative change above 1e-6
    raises :class:`ConvergenceError`.
    """
    if row.mu2 != col.mu2:
        raise ValueError("matrix elements couple equal-helicity channels only")
    if pot.fourier is None:
        raise ValueError(f"potential kind {pot.kind.value} has no Fourier kernel")
    if p <= 0 or q <= 0:
        raise ValueError("radial momenta must be positive")
    val = _matrix_element_on_grid(row, col, p, q, pot, grid)
    if verify:
        finer = AngularGrid.build(2 * grid.n_theta, 2 * grid.n_phi + 1)
        ref = _matrix_element_on_grid(row, col, p, q, pot, finer)
        denom = max(abs(ref), 1e-300)
        if abs(val - ref) / denom > 1e-6:
            raise ConvergenceError(
                f"angular quadrature not converged: {val} vs {ref} on refinement")
    return val
