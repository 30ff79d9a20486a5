"""Acceptance suite: every criterion at its stated tolerance.

Run with `pytest tests/test_acceptance.py -v -s` to see one pass/fail line
per criterion together with its runtime.
"""

import time

import numpy as np
import pytest

from helikin.basis import AngularGrid, MonopoleIndex, angular_inner_product, monopole_harmonic
from helikin.gauge import (
    PATCH_N,
    PATCH_S,
    Coupling,
    MomentumPoint,
    field_strength,
    tetrahedron_cocycle,
)
from helikin.hopf import chern_number, helicity_residual
from helikin.screening import (
    berry_phase_form_factor,
    cross_patch_form_factor,
    equator_crossing,
    overlap_form_factor,
)
from helikin.spectra import (
    RadialGrid,
    degeneracy_count,
    lifted_oscillator_levels,
    oscillator_energy,
    solve_hydrogen,
    solve_radial_oscillator,
    splitting_report,
)
from helikin.experiments import _origin_inside

from oracles import ylm_condon_shortley


def report(n, title, passed, detail, t0):
    status = "PASS" if passed else "FAIL"
    print(f"ACCEPTANCE {n} [{status}] {title}: {detail} ({time.time() - t0:.1f}s)")
    assert passed, f"criterion {n}: {detail}"


def test_criterion_1_basis_fidelity():
    t0 = time.time()
    grid = AngularGrid.build(48, 32)
    worst_gram = 0.0
    for mu2 in (0, 1, -1):
        idxs = [MonopoleIndex(l2, m2, mu2)
                for l2 in range(abs(mu2), 10, 2)
                for m2 in range(-l2, l2 + 1, 2)]
        for i, a in enumerate(idxs):
            for b in idxs[i:]:
                want = 1.0 if a == b else 0.0
                worst_gram = max(worst_gram,
                                 abs(angular_inner_product(a, b, grid) - want))
    th, ph = np.meshgrid(grid.theta_nodes, grid.phi_nodes, indexing="ij")
    worst_mu0 = 0.0
    for l in range(5):
        for m in range(-l, l + 1):
            got = monopole_harmonic(MonopoleIndex.of(l, m, 0), th, ph)
            want = ylm_condon_shortley(l, m, th, ph)
            worst_mu0 = max(worst_mu0, float(np.max(np.abs(got - want))))
    elapsed = time.time() - t0
    passed = worst_gram < 1e-10 and worst_mu0 < 1e-12 and elapsed < 10.0
    report(1, "basis fidelity",
           passed,
           f"gram deviation {worst_gram:.2e} (<1e-10), "
           f"spinless reduction {worst_mu0:.2e} (<1e-12)", t0)


def test_criterion_2_flux_quantization():
    t0 = time.time()
    coup = Coupling(1.0, 0.5)
    grid = AngularGrid.build(16, 8)
    worst_flux = 0.0
    for r in (0.5, 1.0, 7.0):
        flux = 0.0
        for ct, w in zip(grid.cos_nodes, grid.cos_weights):
            theta = float(np.arccos(ct))
            for phi in grid.phi_nodes:
                pt = MomentumPoint(p=r, theta=theta, phi=float(phi))
                flux += w * grid.phi_weight * r * r * float(
                    field_strength(pt, coup) @ pt.unit)
        worst_flux = max(worst_flux, abs(flux - 4 * np.pi * coup.g))

    rng = np.random.default_rng(2026)
    worst_res = 0.0
    worst_unquantized = np.inf
    n_done = 0
    while n_done < 1000:
        verts = rng.uniform(-1, 1, (4, 3))
        if not _origin_inside(verts):
            continue
        p = MomentumPoint.from_cartesian(verts[0])
        v1, v2, v3 = verts[1] - verts[0], verts[2] - verts[1], verts[3] - verts[2]
        w3 = tetrahedron_cocycle(p, v1, v2, v3, coup)
        worst_res = max(worst_res, abs(w3 - 2 * np.pi * round(w3 / (2 * np.pi))))
        w3u = tetrahedron_cocycle(p, v1, v2, v3, Coupling(1.0, 0.3))
        worst_unquantized = min(worst_unquantized,
                                abs(w3u - 2 * np.pi * round(w3u / (2 * np.pi))))
        n_done += 1
    elapsed = time.time() - t0
    passed = (worst_flux < 1e-8 and worst_res < 1e-8
              and worst_unquantized > 0.1 and elapsed < 30.0)
    report(2, "flux quantization", passed,
           f"sphere flux error {worst_flux:.2e} (<1e-8), "
           f"1000 tetrahedra mod-2pi residual {worst_res:.2e} (<1e-8), "
           f"eg=0.3 residual {worst_unquantized:.3f} (>0.1)", t0)


def test_criterion_3_chern_numbers():
    t0 = time.time()
    grid = AngularGrid.build(128, 128)
    cp = chern_number(+1, grid)
    cm = chern_number(-1, grid)
    passed = abs(cp - 1.0) < 1e-8 and abs(cm + 1.0) < 1e-8
    report(3, "Chern numbers", passed,
           f"c1(+) = {cp:+.12f}, c1(-) = {cm:+.12f} (tol 1e-8)", t0)


def test_criterion_4_helicity_eigenchecks():
    t0 = time.time()
    rng = np.random.default_rng(4)
    worst = 0.0
    for _ in range(10_000):
        theta = float(rng.uniform(0, np.pi))
        phi = float(rng.uniform(0, 2 * np.pi))
        patch = PATCH_N if theta <= np.pi / 2 else PATCH_S
        worst = max(worst,
                    helicity_residual(patch, theta, phi, +1),
                    helicity_residual(patch, theta, phi, -1))
    passed = worst < 1e-12
    report(4, "helicity eigen-checks", passed,
           f"max residual {worst:.2e} over 10^4 points, both signs (<1e-12)", t0)


def test_criterion_5_form_factor_consistency():
    t0 = time.time()
    rng = np.random.default_rng(5)

    # exact conjugation symmetry and corrected crossing geometry
    sym_exact = True
    worst_kz = 0.0
    on_segment = True
    for _ in range(10_000):
        a = MomentumPoint(p=rng.uniform(0.4, 2.5), theta=rng.uniform(0.05, np.pi / 2 - 0.01),
                          phi=rng.uniform(0, 2 * np.pi))
        b = MomentumPoint(p=rng.uniform(0.4, 2.5), theta=rng.uniform(np.pi / 2 + 0.01, np.pi - 0.05),
                          phi=rng.uniform(0, 2 * np.pi))
        f_ns = cross_patch_form_factor(a, b).value
        f_sn = cross_patch_form_factor(b, a).value
        if f_sn != np.conj(f_ns):
            sym_exact = False
        k = equator_crossing(a, b).cartesian
        worst_kz = max(worst_kz, abs(k[2]))
        d = b.cartesian - a.cartesian
        t = float((k - a.cartesian) @ d / (d @ d))
        if not (0.0 < t < 1.0 and np.linalg.norm(k - a.cartesian - t * d) < 1e-12):
            on_segment = False

    # overlap vs transported phase: complex gap shrinks at order >= 1.9
    base = MomentumPoint(p=1.0, theta=0.9, phi=1.2)
    step = np.array([0.3, -0.5, 0.4])
    step /= np.linalg.norm(step)
    gaps = []
    for h in (2e-2, 1e-2, 5e-3):
        other = MomentumPoint.from_cartesian(base.cartesian + h * step)
        fo = overlap_form_factor(PATCH_N, base, other).value
        fp = berry_phase_form_factor(PATCH_N, base, other, steps=32).value
        gaps.append(abs(fo - fp))
    order = min(np.log2(gaps[0] / gaps[1]), np.log2(gaps[1] / gaps[2]))

    passed = sym_exact and worst_kz < 1e-14 and on_segment and order >= 1.9
    report(5, "form-factor consistency", passed,
           f"F_SN = conj(F_NS) exactly: {sym_exact}, |k_E.z| max {worst_kz:.1e} "
           f"(<1e-14), on-segment: {on_segment}, observed order {order:.2f} (>=1.9)", t0)


def test_criterion_6_oscillator_spectrum():
    t0 = time.time()
    grid = RadialGrid.oscillator(6000, 14.0)
    worst = 0.0
    for l, mu in [(0.5, 0.5), (1.5, 0.5), (2.5, 0.5), (3.5, 0.5),
                  (0, 0.0), (1, 0.0), (2, 0.0), (3, 0.0)]:
        res = solve_radial_oscillator(l, mu, grid, count=6)
        for v, e in enumerate(res.energies()):
            worst = max(worst, abs(e - oscillator_energy(v, l, mu)))

    shell = degeneracy_count(2)
    levels = lifted_oscillator_levels(0.5, max_energy=16.0)
    min_gap = float(np.min(np.diff(np.sort([e for e, _, _ in levels]))))
    elapsed = time.time() - t0
    passed = worst < 1e-4 and shell == 6 and min_gap > 1e-6 and elapsed < 120.0
    report(6, "oscillator spectrum", passed,
           f"max |E_num - E_ana| = {worst:.2e} (<1e-4, v<=5), "
           f"N=2 degeneracy {shell} (=6), min helicity-level gap "
           f"{min_gap:.2e} (>1e-6)", t0)


def test_criterion_7_hydrogen_validation():
    t0 = time.time()
    ang = AngularGrid.build(48, 33)
    worst_rel = 0.0
    worst_herm = 0.0
    for Z in (1.0, 2.0):
        grid = RadialGrid.rational(200, Z)
        res = solve_hydrogen(0.0, Z, 0, grid, ang, count=3)
        worst_herm = max(worst_herm, res.metadata["hermiticity_residual"])
        for e, n in zip(res.energies(), (1, 2, 3)):
            want = -Z * Z / (2 * n * n)
            worst_rel = max(worst_rel, abs(e - want) / abs(want))
    elapsed = time.time() - t0
    passed = worst_rel < 1e-3 and worst_herm < 1e-10 and elapsed < 300.0
    report(7, "hydrogen validation", passed,
           f"Rydberg n=1..3, Z in (1,2): max rel error {worst_rel:.2e} (<1e-3), "
           f"hermiticity residual {worst_herm:.2e} (<1e-10)", t0)


def test_criterion_8_screening_prediction():
    t0 = time.time()
    ang = AngularGrid.build(48, 33)
    results = []
    for n_rad in (130, 200):
        grid = RadialGrid.rational(n_rad, 1.0)
        results.append(solve_hydrogen(0.0, 1.0, 1, grid, ang, count=2))
        results.append(solve_hydrogen(0.5, 1.0, 0.5, grid, ang, count=2))
    rows = splitting_report(results)
    assert rows, "no splittings reported"
    worst_conv = max(r["convergence_estimate"] for r in rows
                     if r["convergence_estimate"] is not None)
    all_finite = all(np.isfinite(r["delta"]) for r in rows if r["delta"] is not None)
    emitted = [f"{r['level']},m={r['m']}: delta={r['delta']:+.6f} "
               f"(conv {r['convergence_estimate']:.2e})" for r in rows]
    passed = all_finite and worst_conv < 0.10
    report(8, "screening prediction", passed,
           f"splittings {'; '.join(emitted)}; max refinement change "
           f"{worst_conv:.2e} (<0.10)", t0)
