"""Spectral solvers: helicity oscillator and screened momentum-space hydrogen.

The oscillator reduces, through u = p F, to a radial equation whose
centrifugal coefficient l(l+1) - mu^2 carries the entire gauge-field
effect; it is solved analytically and by second-order central finite
differences.  Hydrogen is solved as a partial-wave integral equation in
momentum space: the screened Coulomb kernel is expanded over Legendre
components with a direction-only angular tensor, discretized by Nystrom
quadrature on a rational momentum map, and regularized with the standard
Lande subtraction of the logarithmic diagonal singularity.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from math import pi, sqrt

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .basis import AngularGrid, MonopoleIndex, as_twice, wigner_d
from .errors import ConvergenceError
from .screening import screening_factor_grid
from .specfun import laguerre_poly, legendre_q_table

__all__ = [
    "RadialMapping",
    "RadialGrid",
    "Channel",
    "SpectrumResult",
    "oscillator_energy",
    "oscillator_wavefunction",
    "solve_radial_oscillator",
    "degeneracy_count",
    "lifted_oscillator_levels",
    "solve_hydrogen",
    "splitting_report",
]


class RadialMapping(enum.Enum):
    LINEAR = "linear"
    RATIONAL_MAP = "rational_map"


@dataclass(frozen=True)
class RadialGrid:
    """Radial momentum grid with quadrature weights (atomic units)."""

    points: np.ndarray
    weights: np.ndarray
    mapping: RadialMapping

    def __post_init__(self):
        if np.any(self.points <= 0):
            raise ValueError("radial grid points must be positive")
        if np.any(np.diff(self.points) <= 0):
            raise ValueError("radial grid points must be strictly increasing")

    @property
    def size(self) -> int:
        return len(self.points)

    @classmethod
    def linear(cls, n: int, p_min: float, p_max: float) -> "RadialGrid":
        """Uniform grid on [p_min, p_max] with trapezoid weights."""
        if n < 2:
            raise ValueError("need at least 2 points")
        pts = np.linspace(p_min, p_max, n)
        h = pts[1] - pts[0]
        w = np.full(n, h)
        w[0] = w[-1] = h / 2
        return cls(points=pts, weights=w, mapping=RadialMapping.LINEAR)

    @classmethod
    def oscillator(cls, n: int, p_max: float) -> "RadialGrid":
        """Uniform grid p_j = j*h with phantom Dirichlet nodes at 0 and p_max.

        Placing the implied zero exactly at the origin removes the O(h)
        boundary-offset error of the finite-difference eigensolver.
        """
        if n < 16:
            raise ValueError("need at least 16 points")
        h = p_max / (n + 1)
        pts = h * np.arange(1, n + 1)
        return cls(points=pts, weights=np.full(n, h), mapping=RadialMapping.LINEAR)

    @classmethod
    def rational(cls, n: int, scale: float) -> "RadialGrid":
        """Gauss-Legendre nodes mapped by p = scale (1+x)/(1-x) onto (0, inf)."""
        if n < 2:
            raise ValueError("need at least 2 points")
        if scale <= 0:
            raise ValueError("scale must be positive")
        x, wx = np.polynomial.legendre.leggauss(n)
        pts = scale * (1 + x) / (1 - x)
        w = wx * scale * 2 / (1 - x) ** 2
        return cls(points=pts, weights=w, mapping=RadialMapping.RATIONAL_MAP)

    def gaussian_moment(self) -> float:
        """Quadrature value of the integral of p^2 e^{-p^2}; exact: sqrt(pi)/4."""
        return float(np.sum(self.weights * self.points**2 * np.exp(-self.points**2)))


@dataclass(frozen=True)
class Channel:
    """One spectral level: radial quantum number v and (l, m, mu) labels."""

    v: int
    l: float
    m: float | None
    mu: float
    energy: float


@dataclass
class SpectrumResult:
    """Ordered eigenvalues with channel labels and solver metadata."""

    channels: list[Channel]
    metadata: dict
    vectors: dict = field(default_factory=dict, repr=False)

    def energies(self, l=None, m=None, mu=None) -> list[float]:
        out = [c.energy for c in self.channels
               if (l is None or c.l == l) and (m is None or c.m == m)
               and (mu is None or c.mu == mu)]
        return sorted(out)


def _validate_l_mu(l: float, mu: float):
    l2 = as_twice(l, "l")
    mu2 = as_twice(mu, "mu")
    if mu2 not in (-1, 0, 1):
        raise ValueError(f"mu must be one of 0, +1/2, -1/2, got {mu}")
    if l2 < abs(mu2) or (l2 - abs(mu2)) % 2 != 0:
        raise ValueError(f"l={l} is not a valid orbital number for mu={mu}")
    return l2, mu2


def oscillator_energy(v: int, l: float, mu: float) -> float:
    """Analytic oscillator level (hbar*omega = 1).

    Spinless sector: 2v + l + 3/2.  Helicity sector |mu| = 1/2:
    2v + sqrt(l(l+1)) + 1, l-dependent because the effective barrier index
    l* = sqrt(l(l+1)) - 1/2 is fractional.
    """
    if not isinstance(v, (int, np.integer)) or v < 0:
        raise ValueError(f"v must be a non-negative integer, got {v}")
    l2, mu2 = _validate_l_mu(l, mu)
    if mu2 == 0:
        return 2 * v + l2 / 2 + 1.5
    l = l2 / 2
    return 2 * v + sqrt(l * (l + 1)) + 1.0


def oscillator_wavefunction(v: int, l: float, p) -> np.ndarray:
    """Unnormalized helicity-sector radial wave function.

    F_{v l}(p) = p^{l*} e^{-p^2/2} L_v^{l* + 1/2}(p^2) with the fractional
    index l* = sqrt(l(l+1)) - 1/2; it has exactly v interior zeros.
    """
    if not isinstance(v, (int, np.integer)) or v < 0:
        raise ValueError(f"v must be a non-negative integer, got {v}")
    lf = as_twice(l, "l") / 2
    p = np.asarray(p, dtype=float)
    if np.any(p < 0):
        raise ValueError("p must be non-negative")
    l_star = sqrt(lf * (lf + 1)) - 0.5
    return p**l_star * np.exp(-p * p / 2) * laguerre_poly(int(v), l_star + 0.5, p * p)


def _count_nodes(vec: np.ndarray, floor: float = 1e-8) -> int:
    v = np.real(vec)
    v = v[np.abs(v) > floor * np.max(np.abs(v))]
    return int(np.sum(v[:-1] * v[1:] < 0))


def solve_radial_oscillator(l: float, mu: float, grid: RadialGrid,
                            count: int = 6) -> SpectrumResult:
    """Oscillator levels by finite differences.

    Solves -u''/2 + [(l(l+1) - mu^2)/(2p^2) + p^2/2] u = E u with Dirichlet
    ends on a uniform grid (u = p F).  Eigenvalues carry a Richardson error
    estimate in the metadata (half-resolution comparison, second order).
    """
    l2, mu2 = _validate_l_mu(l, mu)
    if grid.mapping is not RadialMapping.LINEAR:
        raise ValueError("the finite-difference oscillator needs a uniform grid")
    p = grid.points
    h = p[1] - p[0]
    if np.max(np.abs(np.diff(p) - h)) > 1e-9 * h:
        raise ValueError("the finite-difference oscillator needs a uniform grid")
    if p[0] > 2 * h:
        raise ValueError("p_min too large: grid must reach toward the origin")
    e_top = oscillator_energy(count - 1, l, mu)
    if p[-1] ** 2 < 4 * e_top:
        raise ValueError(
            f"grid too small: need p_max^2 >> 2 E_max (p_max={p[-1]:.2f}, E_max={e_top:.2f})")

    def levels(pts: np.ndarray, n_want: int):
        step = pts[1] - pts[0]
        coeff = (l2 / 2) * (l2 / 2 + 1) - (mu2 / 2) ** 2
        diag = 1.0 / step**2 + coeff / (2 * pts**2) + pts**2 / 2
        off = np.full(len(pts) - 1, -0.5 / step**2)
        return eigh_tridiagonal(diag, off, select="i", select_range=(0, n_want - 1))

    vals, vecs = levels(p, count)
    coarse_vals, _ = levels(p[1::2], count)
    tolerance = float(np.max(np.abs(vals - coarse_vals)) / 3.0)

    channels = []
    vectors = {}
    for k in range(count):
        v_nodes = _count_nodes(vecs[:, k])
        channels.append(Channel(v=v_nodes, l=l2 / 2, m=None, mu=mu2 / 2,
                                energy=float(vals[k])))
        vectors[(v_nodes, l2 / 2)] = vecs[:, k]
    meta = {
        "problem": "oscillator",
        "method": "central finite differences, Dirichlet ends",
        "grid_size": grid.size,
        "p_max": float(p[-1] + h),
        "tolerance_estimate": tolerance,
    }
    return SpectrumResult(channels=channels, metadata=meta, vectors=vectors)


def degeneracy_count(N: int) -> int:
    """Spinless-shell degeneracy: states (v, l, m) with 2v + l = N."""
    if not isinstance(N, (int, np.integer)) or N < 0:
        raise ValueError(f"N must be a non-negative integer, got {N}")
    total = 0
    for l in range(N % 2, N + 1, 2):
        total += 2 * l + 1
    return total


def lifted_oscillator_levels(mu: float, max_energy: float) -> list[tuple[float, float, int]]:
    """Distinct helicity-sector levels (energy, l, 2l+1 multiplicity) below a cap.

    The fractional barrier index makes every (v, l) combination land on its
    own energy, so no spinless N-shell grouping survives.
    """
    _, mu2 = _validate_l_mu(abs(mu) if mu != 0 else 0.5, mu)
    if mu2 == 0:
        raise ValueError("the spinless sector keeps its N-shell degeneracy; "
                         "use degeneracy_count")
    out = []
    l2 = abs(mu2)
    while True:
        base = oscillator_energy(0, l2 / 2, mu2 / 2)
        if base > max_energy:
            break
        v = 0
        while True:
            e = oscillator_energy(v, l2 / 2, mu2 / 2)
            if e > max_energy:
                break
            out.append((e, l2 / 2, l2 + 1))
            v += 1
        l2 += 2
    return sorted(out)


def _odd_at_least(n: int) -> int:
    n = max(n, 3)
    return n if n % 2 == 1 else n + 1


def _angular_tensor(idx: MonopoleIndex, lam_max: int, grid_ang: AngularGrid,
                    n_dphi: int | None = None) -> np.ndarray:
    """Direction-only Legendre components of the screened kernel.

    J_lam = integral over both spheres of conj(Y) P_lam(p_hat . q_hat) F Y.
    The screening factor is axially invariant in the global gauge, so the
    double azimuthal integral collapses to one over dphi = phi_q - phi_p
    (odd node count, so no exactly antipodal direction pairs occur).
    """
    if n_dphi is None:
        n_dphi = _odd_at_least(max(2 * lam_max + 17, grid_ang.n_phi))
    th = grid_ang.theta_nodes
    wth = grid_ang.cos_weights
    dphi = 2 * pi * np.arange(n_dphi) / n_dphi
    w_dphi = 2 * pi / n_dphi

    TH_P = th[:, None, None]
    TH_Q = th[None, :, None]
    DP = dphi[None, None, :]
    F = screening_factor_grid(idx.mu2, TH_P, TH_Q, DP)
    x3 = (np.cos(TH_P) * np.cos(TH_Q)
          + np.sin(TH_P) * np.sin(TH_Q) * np.cos(DP))

    d_th = wigner_d(idx.l2, idx.m2, idx.mu2, th)
    mode = (idx.m2 - idx.mu2) / 2
    pref = 2 * pi * (idx.l2 + 1) / (4 * pi) * w_dphi
    W = ((wth * d_th)[:, None, None] * (wth * d_th)[None, :, None]
         * F * np.exp(1j * mode * DP))

    J = np.zeros(lam_max + 1, dtype=complex)
    P_prev = np.ones_like(x3)
    J[0] = pref * np.sum(W * P_prev)
    if lam_max >= 1:
        P_cur = x3
        J[1] = pref * np.sum(W * P_cur)
        for lam in range(1, lam_max):
            P_prev, P_cur = P_cur, ((2 * lam + 1) * x3 * P_cur - lam * P_prev) / (lam + 1)
            J[lam + 1] = pref * np.sum(W * P_cur)
    return J


def _hydrogen_channel_matrix(Z: float, idx: MonopoleIndex, grid: RadialGrid,
                             grid_ang: AngularGrid, lam_max: int):
    """Nystrom matrix of the screened Coulomb problem for one (l, m, mu).

    Off-diagonal: -Z/(4 pi^2) sqrt(w_i w_j) sum_lam (2lam+1) J_lam Q_lam(z_ij)
    in the symmetrized representation G_i = sqrt(w_i) p_i F_i.  The diagonal
    log singularity is removed by Lande subtraction: the Q_0 profile with
    known integral pi^2/2 is subtracted and its analytic value added back;
    the subtracted integrand's diagonal limit is -sum (2lam+1) J_lam H_lam
    with H_lam the harmonic numbers (the z -> 1 limit of Q_lam - Q_0).
    """
    J = _angular_tensor(idx, lam_max, grid_ang)
    imag_resid = float(np.max(np.abs(J.imag)))
    if imag_resid > 1e-8:
        raise ConvergenceError(
            f"angular tensor has imaginary residue {imag_resid:.2e}; "
            "refine the angular grid")
    Jr = J.real
    lam = np.arange(lam_max + 1)
    coef = (2 * lam + 1) * Jr
    strength = float(coef.sum())          # 4 pi when fully resolved
    if abs(strength / (4 * pi) - 1) > 0.05:
        raise ConvergenceError(
            f"angular quadrature under-resolved: log-singularity strength "
            f"{strength / (4 * pi):.4f} of expected; refine the angular grid")
    harm = np.concatenate([[0.0], np.cumsum(1.0 / np.arange(1, lam_max + 1))])
    sub_limit = float((coef * harm).sum())

    p = grid.points
    w = grid.weights
    n = grid.size
    P, Q = np.meshgrid(p, p, indexing="ij")
    z = (P**2 + Q**2) / (2 * P * Q)
    np.fill_diagonal(z, 2.0)  # placeholder; the diagonal is rebuilt below
    q_table = legendre_q_table(lam_max, z)
    kernel = np.tensordot(coef, q_table, axes=(0, 0))
    q0 = q_table[0]

    pref = -Z / (4 * pi**2)
    sw = np.sqrt(w)
    H = pref * np.outer(sw, sw) * kernel
    inv_p = 1.0 / p
    for i in range(n):
        row = w * q0[i] * inv_p
        s0 = float(row.sum() - row[i])
        H[i, i] = p[i] ** 2 / 2 + pref * (
            -w[i] * sub_limit + strength * (pi**2 / 2 * p[i] - p[i] * s0))
    info = {
        "lam_max": lam_max,
        "singular_strength": strength / (4 * pi),
        "tensor_imag_residue": imag_resid,
    }
    return H, info


def solve_hydrogen(mu: float, Z: float, l: float, grid: RadialGrid,
                   grid_ang: AngularGrid, count: int = 3, lam_max: int = 48,
                   m_values=None) -> SpectrumResult:
    """Bound states of the screened momentum-space Coulomb problem.

    Solves p^2/2 F(p) + integral of K(p,q) F(q) q^2 dq = E F(p) per
    (l, m, mu) channel, with K built from the partial-wave screened kernel
    and the attractive potential U(q) = -Z/(2 pi^2 q^2).  The spinless
    sector reproduces the Rydberg series; helicity sectors are the
    artifact's prediction and are validated by grid convergence only.
    """
    if Z <= 0:
        raise ValueError(f"Z must be positive, got {Z}")
    l2, mu2 = _validate_l_mu(l, mu)
    if grid.size < 100:
        raise ValueError(f"hydrogen grid needs >= 100 radial points, got {grid.size}")
    if count < 1:
        raise ValueError("count must be >= 1")
    if m_values is None:
        m2_list = [m2 for m2 in range(-l2, l2 + 1, 2)] if mu2 != 0 else [l2 % 2]
    else:
        m2_list = [as_twice(m, "m") for m in m_values]

    def solve_channel(m2: int):
        idx = MonopoleIndex(l2, m2, mu2)
        H, info = _hydrogen_channel_matrix(Z, idx, grid, grid_ang, lam_max)
        resid = float(np.max(np.abs(H - H.conj().T)))
        vals, vecs = np.linalg.eigh((H + H.conj().T) / 2)
        return m2, vals, vecs, resid, info

    if len(m2_list) > 1:
        from concurrent.futures import ThreadPoolExecutor

        from .parallel import worker_count
        with ThreadPoolExecutor(max_workers=worker_count(len(m2_list))) as pool:
            solved = list(pool.map(solve_channel, m2_list))
    else:
        solved = [solve_channel(m2_list[0])]

    channels = []
    vectors = {}
    herm_resid = 0.0
    info_out = {}
    n_bound_min = None
    for m2, vals, vecs, resid, info in solved:
        herm_resid = max(herm_resid, resid)
        bound = np.where(vals < 0)[0]
        n_bound = len(bound)
        n_bound_min = n_bound if n_bound_min is None else min(n_bound, n_bound_min)
        for k in bound[:count]:
            v_nodes = _count_nodes(vecs[:, k])
            channels.append(Channel(v=v_nodes, l=l2 / 2, m=m2 / 2, mu=mu2 / 2,
                                    energy=float(vals[k])))
            vectors[(v_nodes, l2 / 2, m2 / 2)] = vecs[:, k]
        info_out = info

    meta = {
        "problem": "hydrogen",
        "method": "nystrom + lande subtraction, rational momentum map",
        "Z": Z,
        "grid_size": grid.size,
        "angular_size": (grid_ang.n_theta, grid_ang.n_phi),
        "hermiticity_residual": herm_resid,
        "bound_states_found": n_bound_min,
        "requested": count,
        **info_out,
    }
    if n_bound_min is not None and n_bound_min < count:
        meta["warning"] = (f"only {n_bound_min} negative-energy states found; "
                           "positive eigenvalues are spurious for bound states")
    return SpectrumResult(channels=channels, metadata=meta, vectors=vectors)


def splitting_report(results: list[SpectrumResult]) -> list[dict]:
    """Level-splitting table between the spinless and helicity sectors.

    Helicity channels (v, l, m) are paired against spinless channels
    (v, l0 = l + 1/2), the pattern they would have been degenerate with.
    When several results of the same sector and channel are supplied
    (successive grid refinements), the relative change of each splitting
    between the two finest grids is reported as its convergence estimate.
    """
    if not results:
        raise ValueError("no results supplied")
    problems = {r.metadata.get("problem") for r in results}
    if len(problems) > 1:
        raise ValueError(f"mixed problem kinds {problems} cannot be compared")
    zs = {r.metadata.get("Z") for r in results if "Z" in r.metadata}
    if len(zs) > 1:
        raise ValueError(f"results disagree on Z: {zs}")

    def sector(r: SpectrumResult) -> float:
        mus = {c.mu for c in r.channels}
        if len(mus) != 1:
            raise ValueError("each result must hold a single mu sector")
        return mus.pop()

    by_sector: dict[float, list[SpectrumResult]] = {}
    for r in results:
        by_sector.setdefault(sector(r), []).append(r)

    def level_map(rs: list[SpectrumResult]) -> dict:
        """(v, l, m) -> list of energies ordered by grid size."""
        out: dict = {}
        for r in sorted(rs, key=lambda r: r.metadata.get("grid_size", 0)):
            for c in r.channels:
                out.setdefault((c.v, c.l, c.m), []).append(c.energy)
        return out

    rows = []
    cross_sector = 0.0 in by_sector and len(by_sector) > 1
    if cross_sector:
        spinless = level_map(by_sector[0.0])
        for mu_val, rs in sorted(by_sector.items()):
            if mu_val == 0.0:
                continue
            helicity = level_map(rs)
            for (v, l, m), energies in sorted(helicity.items()):
                l0 = l + 0.5
                partners = [e for (v0, lp, _), e in spinless.items()
                            if v0 == v and lp == l0]
                e_mu = energies[-1]
                e_0 = partners[0][-1] if partners else None
                delta = e_mu - e_0 if e_0 is not None else None
                conv = None
                if delta is not None and len(energies) >= 2:
                    coarse_e0 = partners[0][-2] if len(partners[0]) >= 2 else e_0
                    coarse_delta = energies[-2] - coarse_e0
                    conv = abs(delta - coarse_delta) / max(abs(delta), 1e-300)
                elif len(energies) >= 2:
                    conv = abs(energies[-1] - energies[-2]) / max(abs(e_mu), 1e-300)
                rows.append({
                    "level": f"v={v},l={l}",
                    "m": m,
                    "mu": mu_val,
                    "energy_mu0": e_0,
                    "energy_mu": e_mu,
                    "delta": delta,
                    "convergence_estimate": conv,
                })
    else:
        # single-sector comparison: deltas between successive refinements
        for mu_val, rs in sorted(by_sector.items()):
            levels = level_map(rs)
            for (v, l, m), energies in sorted(levels.items()):
                delta = energies[-1] - energies[0]
                conv = (abs(energies[-1] - energies[-2]) / max(abs(energies[-1]), 1e-300)
                        if len(energies) >= 2 else None)
                rows.append({
                    "level": f"v={v},l={l}",
                    "m": m,
                    "mu": mu_val,
                    "energy_mu0": None,
                    "energy_mu": energies[-1],
                    "delta": delta,
                    "convergence_estimate": conv,
                })
    return rows
