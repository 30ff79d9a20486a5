"""Runtime invariant suite behind the `selftest` command and endpoint.

A fast curated subset of the library's defining identities; each check
returns a (name, passed, detail) row.  The exhaustive suite lives in the
package's pytest tests.
"""

from __future__ import annotations

import numpy as np

from .basis import AngularGrid, MonopoleIndex, angular_inner_product, monopole_harmonic
from .gauge import (
    PATCH_N,
    Coupling,
    MomentumPoint,
    dirac_check,
    field_strength,
    line_integral,
    tetrahedron_cocycle,
    triangle_cocycle,
)
from .hopf import chern_number, helicity_residual, section
from .screening import (
    PotentialSpec,
    berry_phase_form_factor,
    cross_patch_form_factor,
    equator_crossing,
    overlap_form_factor,
)
from .spectra import RadialGrid, oscillator_energy, solve_radial_oscillator
from .specfun import gauss_legendre

HALF = Coupling(1.0, 0.5)


def _check_quadrature():
    rule = gauss_legendre(8)
    err = abs(rule.integrate(lambda z: z**14) - 2.0 / 15.0)
    return err < 1e-13, f"degree-14 moment error {err:.2e}"


def _check_orthonormality():
    grid = AngularGrid.build(24, 16)
    worst = 0.0
    for mu2 in (0, 1):
        idxs = [MonopoleIndex(l2, m2, mu2)
                for l2 in range(abs(mu2), 4, 2) for m2 in range(-l2, l2 + 1, 2)]
        for i, a in enumerate(idxs):
            for b in idxs[i:]:
                val = angular_inner_product(a, b, grid)
                want = 1.0 if a == b else 0.0
                worst = max(worst, abs(val - want))
    return worst < 1e-10, f"max Gram deviation {worst:.2e}"


def _check_mu0_reduction():
    from scipy.special import sph_harm_y
    idx = MonopoleIndex.of(2, 1, 0)
    theta, phi = 1.1, 0.7
    got = monopole_harmonic(idx, theta, phi)
    try:
        want = sph_harm_y(2, 1, theta, phi)
    except TypeError:  # older scipy signature
        from scipy.special import sph_harm
        want = sph_harm(1, 2, phi, theta)
    err = abs(got - complex(want))
    return err < 1e-12, f"|Y_21 - standard| = {err:.2e}"


def _check_flux_quantization():
    grid = AngularGrid.build(16, 8)
    flux = 0.0
    for ct, w in zip(grid.cos_nodes, grid.cos_weights):
        theta = float(np.arccos(ct))
        for phi in grid.phi_nodes:
            pt = MomentumPoint(p=1.3, theta=theta, phi=float(phi))
            flux += w * grid.phi_weight * 1.3**2 * float(field_strength(pt, HALF) @ pt.unit)
    err = abs(flux - 4 * np.pi * HALF.g)
    return err < 1e-8, f"sphere flux error {err:.2e}"


def _check_cocycle_quantization():
    rng = np.random.default_rng(0)
    worst = 0.0
    n_done = 0
    while n_done < 20:
        verts = rng.uniform(-1, 1, (4, 3))
        vol6 = np.dot(verts[1] - verts[0],
                      np.cross(verts[2] - verts[0], verts[3] - verts[0]))
        if abs(vol6) < 0.05:
            continue
        # keep only origin-enclosing tetrahedra
        try:
            w3 = tetrahedron_cocycle(MomentumPoint.from_cartesian(verts[0]),
                                     verts[1] - verts[0], verts[2] - verts[1],
                                     verts[3] - verts[2], HALF)
        except ValueError:
            continue
        if abs(w3) < 1.0:
            continue
        worst = max(worst, abs(w3 - 2 * np.pi * round(w3 / (2 * np.pi))))
        n_done += 1
    return worst < 1e-8, f"max mod-2pi residual {worst:.2e} over {n_done} tetrahedra"


def _check_stokes():
    rng = np.random.default_rng(1)
    worst = 0.0
    for _ in range(10):
        base = MomentumPoint(p=1.0, theta=rng.uniform(0.3, 1.2),
                             phi=rng.uniform(0, 2 * np.pi))
        v1 = rng.uniform(-0.04, 0.04, 3)
        v2 = rng.uniform(-0.04, 0.04, 3)
        w0 = base.cartesian
        pts = [MomentumPoint.from_cartesian(w) for w in (w0, w0 + v1, w0 + v1 + v2)]
        if not all(PATCH_N.contains(q.theta) for q in pts):
            continue
        loop = (line_integral(PATCH_N, pts[0], pts[1], HALF)
                + line_integral(PATCH_N, pts[1], pts[2], HALF)
                + line_integral(PATCH_N, pts[2], pts[0], HALF))
        worst = max(worst, abs(loop - triangle_cocycle(base, v1, v2, HALF)))
    return worst < 1e-6, f"max Stokes mismatch {worst:.2e}"


def _check_chern():
    grid = AngularGrid.build(64, 64)
    cp = chern_number(+1, grid)
    cm = chern_number(-1, grid)
    err = max(abs(cp - 1), abs(cm + 1))
    return err < 1e-8, f"c1 = ({cp:+.10f}, {cm:+.10f})"


def _check_helicity():
    rng = np.random.default_rng(2)
    worst = 0.0
    for _ in range(100):
        theta = rng.uniform(0, np.pi)
        phi = rng.uniform(0, 2 * np.pi)
        from .gauge import PATCH_S
        patch = PATCH_N if theta <= np.pi / 2 else PATCH_S
        worst = max(worst, helicity_residual(patch, theta, phi, +1),
                    helicity_residual(patch, theta, phi, -1))
    return worst < 1e-12, f"max helicity residual {worst:.2e}"


def _check_form_factors():
    rng = np.random.default_rng(3)
    worst_sym = 0.0
    worst_seg = 0.0
    for _ in range(100):
        a = MomentumPoint(p=rng.uniform(0.5, 2), theta=rng.uniform(0.1, np.pi / 2 - 0.05),
                          phi=rng.uniform(0, 2 * np.pi))
        b = MomentumPoint(p=rng.uniform(0.5, 2), theta=rng.uniform(np.pi / 2 + 0.05, np.pi - 0.1),
                          phi=rng.uniform(0, 2 * np.pi))
        f_ns = cross_patch_form_factor(a, b).value
        f_sn = cross_patch_form_factor(b, a).value
        worst_sym = max(worst_sym, abs(f_sn - np.conj(f_ns)))
        k = equator_crossing(a, b).cartesian
        worst_seg = max(worst_seg, abs(k[2]))
    ok = worst_sym == 0.0 and worst_seg < 1e-14
    return ok, f"symmetry gap {worst_sym:.1e}, |k_E.z| max {worst_seg:.1e}"


def _check_overlap_phase():
    a = MomentumPoint(p=1.0, theta=0.8, phi=0.3)
    b = MomentumPoint(p=1.1, theta=0.9, phi=0.5)
    fo = overlap_form_factor(PATCH_N, a, b).value
    fp = berry_phase_form_factor(PATCH_N, a, b, steps=32).value
    err = abs(np.angle(fo) - np.angle(fp))
    return err < 1e-10 and abs(fo) < 1, f"phase gap {err:.2e}, |overlap| = {abs(fo):.6f}"


def _check_oscillator():
    grid = RadialGrid.oscillator(1200, 12.0)
    res = solve_radial_oscillator(0.5, 0.5, grid, count=2)
    worst = max(abs(e - oscillator_energy(v, 0.5, 0.5))
                for v, e in enumerate(res.energies()))
    return worst < 1e-3, f"max level error {worst:.2e} (coarse grid)"


def _check_dirac():
    ok = (dirac_check(Coupling(1.0, 0.5)).quantized
          and not dirac_check(Coupling(1.0, 0.3)).quantized)
    return ok, "eg = 1/2 quantized, eg = 0.3 not"


CHECKS = [
    ("quadrature_exactness", _check_quadrature),
    ("harmonic_orthonormality", _check_orthonormality),
    ("spinless_reduction", _check_mu0_reduction),
    ("flux_quantization", _check_flux_quantization),
    ("cocycle_quantization", _check_cocycle_quantization),
    ("stokes_consistency", _check_stokes),
    ("chern_numbers", _check_chern),
    ("helicity_eigenstates", _check_helicity),
    ("form_factor_symmetry", _check_form_factors),
    ("overlap_phase_identity", _check_overlap_phase),
    ("oscillator_levels", _check_oscillator),
    ("dirac_condition", _check_dirac),
]


def run_selftest() -> list[dict]:
    rows = []
    for name, fn in CHECKS:
        try:
            ok, detail = fn()
        except Exception as exc:  # a crashed check is a failed check
            ok, detail = False, f"raised {type(exc).__name__}: {exc}"
        rows.append({"check": name, "status": "pass" if ok else "fail", "detail": detail})
    return rows
