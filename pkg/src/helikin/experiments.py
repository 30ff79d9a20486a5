"""Batch experiment runners shared by the service endpoints.

Each runner validates its numeric inputs, performs one reproducible
experiment, and returns (rows, extra_meta) with plain-JSON values only.
Randomized geometry uses an explicit 64-bit seed.
"""

from __future__ import annotations

from math import pi

import numpy as np

from .basis import AngularGrid, MonopoleIndex, angular_inner_product, as_twice, monopole_harmonic
from .gauge import Coupling, MomentumPoint, field_strength, tetrahedron_cocycle
from .hopf import chern_number
from .screening import (
    PATCH_N,
    PATCH_S,
    berry_phase_form_factor,
    hemisphere,
    overlap_form_factor,
    screening_factor,
)
from .parallel import worker_count
from .selftest import run_selftest
from .spectra import RadialGrid, oscillator_energy, solve_hydrogen, solve_radial_oscillator, splitting_report

__all__ = [
    "worker_count",
    "run_harmonics",
    "run_flux",
    "run_cocycle",
    "run_chern",
    "run_formfactor",
    "run_oscillator",
    "run_hydrogen",
    "run_selftest_rows",
]


def _sector_indices(mu: float, lmax: float) -> list[MonopoleIndex]:
    mu2 = as_twice(mu, "mu")
    l2_max = as_twice(lmax, "lmax")
    if l2_max < abs(mu2) or (l2_max - abs(mu2)) % 2 != 0:
        raise ValueError(f"lmax={lmax} is not reachable from mu={mu} in integer steps")
    return [MonopoleIndex(l2, m2, mu2)
            for l2 in range(abs(mu2), l2_max + 1, 2)
            for m2 in range(-l2, l2 + 1, 2)]


def run_harmonics(mu: float, lmax: float, n_theta: int, n_phi: int, table: str):
    """Values of Y_{l m mu} over the grid, or their orthonormality matrix."""
    idxs = _sector_indices(mu, lmax)
    grid = AngularGrid.build(n_theta, n_phi)
    if n_phi < 2 * lmax + 2:
        raise ValueError(f"n_phi must be >= 2*lmax + 2 = {2 * lmax + 2:.0f}")
    rows = []
    if table == "values":
        for idx in idxs:
            th = grid.theta_nodes
            for t in th:
                vals = monopole_harmonic(idx, float(t), grid.phi_nodes)
                for f, v in zip(grid.phi_nodes, np.atleast_1d(vals)):
                    rows.append({"l": idx.l, "m": idx.m, "mu": idx.mu,
                                 "theta": float(t), "phi": float(f),
                                 "re": float(np.real(v)), "im": float(np.imag(v))})
        return rows, {}
    if table == "gram":
        worst = 0.0
        for i, a in enumerate(idxs):
            for b in idxs[i:]:
                val = angular_inner_product(a, b, grid)
                want = 1.0 if a == b else 0.0
                err = abs(val - want)
                worst = max(worst, err)
                rows.append({"l_row": a.l, "m_row": a.m, "l_col": b.l, "m_col": b.m,
                             "re": float(val.real), "im": float(val.imag),
                             "abs_error": float(err)})
        return rows, {"max_gram_deviation": float(worst)}
    raise ValueError(f"table must be 'values' or 'gram', got {table!r}")


def run_flux(g: float, radii: list[float], n_theta: int, n_phi: int):
    """Numerical monopole flux through spheres; expected 4 pi g at any radius."""
    if not radii:
        raise ValueError("at least one radius required")
    coup = Coupling(e=1.0, g=g)
    grid = AngularGrid.build(n_theta, n_phi)
    rows = []
    for r in radii:
        if r <= 0:
            raise ValueError(f"radius must be positive, got {r}")
        flux = 0.0
        for ct, w in zip(grid.cos_nodes, grid.cos_weights):
            theta = float(np.arccos(ct))
            for phi in grid.phi_nodes:
                pt = MomentumPoint(p=float(r), theta=theta, phi=float(phi))
                flux += w * grid.phi_weight * r * r * float(field_strength(pt, coup) @ pt.unit)
        expected = 4 * pi * g
        rows.append({"radius": float(r), "flux": float(flux),
                     "expected": float(expected),
                     "abs_error": float(abs(flux - expected))})
    return rows, {}


def _origin_inside(verts: np.ndarray) -> bool:
    total = np.dot(verts[1] - verts[0], np.cross(verts[2] - verts[0], verts[3] - verts[0]))
    if abs(total) < 1e-12:
        return False
    sign = np.sign(total)
    for i in range(4):
        sub = verts.copy()
        sub[i] = 0.0
        vol = np.dot(sub[1] - sub[0], np.cross(sub[2] - sub[0], sub[3] - sub[0]))
        if np.sign(vol) != sign or abs(vol) < 1e-14:
            return False
    return True


def run_cocycle(eg: float, tetrahedra: int, seed: int, scale: float = 1.0):
    """Associativity phases of random origin-enclosing tetrahedra.

    Reports omega_3 and its distance to the nearest multiple of 2 pi; for
    eg = n/2 the fraction with residual < 1e-8 is 1.0.
    """
    if tetrahedra < 1:
        raise ValueError("tetrahedra must be >= 1")
    if scale <= 0:
        raise ValueError("scale must be positive")
    coup = Coupling(e=1.0, g=eg)
    rng = np.random.default_rng(np.uint64(seed))
    rows = []
    quantized = 0
    attempts = 0
    while len(rows) < tetrahedra:
        attempts += 1
        if attempts > 1000 * tetrahedra:
            raise RuntimeError("tetrahedron sampling failed to enclose the origin")
        verts = rng.uniform(-scale, scale, (4, 3))
        if not _origin_inside(verts):
            continue
        w3 = tetrahedron_cocycle(MomentumPoint.from_cartesian(verts[0]),
                                 verts[1] - verts[0], verts[2] - verts[1],
                                 verts[3] - verts[2], coup)
        residual = abs(w3 - 2 * pi * round(w3 / (2 * pi)))
        ok = residual < 1e-8
        quantized += ok
        rows.append({"index": len(rows), "omega3": float(w3),
                     "mod_2pi_residual": float(residual), "quantized": int(ok)})
    return rows, {"fraction_quantized": quantized / tetrahedra,
                  "eg": eg, "expected_omega3": float(4 * pi * eg)}


def run_chern(sector: str, n_theta: int, n_phi: int):
    grid = AngularGrid.build(n_theta, n_phi)
    wanted = {"plus": [+1], "minus": [-1], "both": [+1, -1]}.get(sector)
    if wanted is None:
        raise ValueError(f"sector must be plus, minus or both, got {sector!r}")
    rows = []
    for sgn in wanted:
        c1 = chern_number(sgn, grid)
        rows.append({"sector": "+1/2" if sgn > 0 else "-1/2", "c1": float(c1),
                     "expected": float(sgn), "abs_error": float(abs(c1 - sgn))})
    return rows, {}


def run_formfactor(kind: str, p_mag: float, theta_p: float, phi_p: float,
                   q_mag: float, n_theta: int, n_phi: int, steps: int = 16):
    """Form factor F(p, q) over a grid of q directions at fixed p."""
    if kind not in ("overlap", "phase", "screening"):
        raise ValueError(f"kind must be overlap, phase or screening, got {kind!r}")
    p = MomentumPoint(p=p_mag, theta=theta_p, phi=phi_p)
    grid = AngularGrid.build(n_theta, n_phi)
    rows = []
    for ct in grid.cos_nodes:
        theta_q = float(np.arccos(ct))
        for phi_q in grid.phi_nodes:
            q = MomentumPoint(p=q_mag, theta=theta_q, phi=float(phi_q))
            same = hemisphere(p).side is hemisphere(q).side
            if kind == "overlap":
                if not same:
                    continue
                val = overlap_form_factor(hemisphere(p), p, q).value
            elif kind == "phase":
                patch = PATCH_N if hemisphere(p).side.value == "N" else PATCH_S
                if not (patch.contains(p.theta) and patch.contains(q.theta)):
                    continue
                val = berry_phase_form_factor(patch, p, q, steps=steps).value
            else:
                val = screening_factor(p, q, 0.5)
            rows.append({"kind": kind, "theta_q": theta_q, "phi_q": float(phi_q),
                         "re": float(val.real), "im": float(val.imag),
                         "abs": float(abs(val))})
    return rows, {"theta_p": theta_p, "phi_p": phi_p}


def run_oscillator(mu: float, lmax: float, vmax: int, grid_size: int, p_max: float):
    """Analytic vs finite-difference oscillator levels for every l <= lmax."""
    if vmax < 0:
        raise ValueError("vmax must be >= 0")
    mu2 = as_twice(mu, "mu")
    l2_values = list(range(abs(mu2), as_twice(lmax, "lmax") + 1, 2))
    if not l2_values:
        raise ValueError(f"no valid l values below lmax={lmax} for mu={mu}")
    grid = RadialGrid.oscillator(grid_size, p_max)
    rows = []
    worst = 0.0
    for l2 in l2_values:
        res = solve_radial_oscillator(l2 / 2, mu2 / 2, grid, count=vmax + 1)
        for v, e_num in enumerate(res.energies()):
            e_ana = oscillator_energy(v, l2 / 2, mu2 / 2)
            err = abs(e_num - e_ana)
            worst = max(worst, err)
            rows.append({"v": v, "l": l2 / 2, "mu": mu2 / 2,
                         "energy_analytic": float(e_ana),
                         "energy_numeric": float(e_num),
                         "abs_error": float(err)})
    return rows, {"max_abs_error": float(worst), "grid_size": grid_size, "p_max": p_max}


def run_hydrogen(mu: float, z: float, l: float, count: int, radial: int,
                 scale: float | None, n_theta: int, n_phi: int, lam_max: int,
                 m: float | None, splittings: bool):
    """Screened hydrogen spectra; optionally the splitting table vs mu = 0.

    With ``splittings`` both sectors are solved at two radial resolutions
    and each reported splitting carries its grid-convergence estimate.
    """
    scale = z if scale is None else scale
    grid_ang = AngularGrid.build(n_theta, n_phi)
    m_values = None if m is None else [m]

    if not splittings:
        grid = RadialGrid.rational(radial, scale)
        res = solve_hydrogen(mu, z, l, grid, grid_ang, count=count,
                             lam_max=lam_max, m_values=m_values)
        rows = []
        for c in sorted(res.channels, key=lambda c: (c.m, c.energy)):
            row = {"l": c.l, "m": c.m, "mu": c.mu, "v": c.v, "energy": c.energy}
            if mu == 0:
                n = c.v + int(c.l) + 1
                rydberg = -z * z / (2 * n * n)
                row["energy_rydberg"] = rydberg
                row["rel_error"] = abs(c.energy - rydberg) / abs(rydberg)
            rows.append(row)
        return rows, dict(res.metadata)

    if as_twice(mu, "mu") == 0:
        raise ValueError("splittings compare a helicity sector against mu = 0; "
                         "request mu = +1/2 or -1/2")
    coarse_n = max(100, int(radial * 2 / 3))
    jobs = []
    for n_rad in (coarse_n, radial):
        grid = RadialGrid.rational(n_rad, scale)
        jobs.append((0.0, l + 0.5, grid, None))
        jobs.append((mu, l, grid, m_values))
    from concurrent.futures import ThreadPoolExecutor
    with ThreadPoolExecutor(max_workers=worker_count(len(jobs))) as pool:
        results = list(pool.map(
            lambda j: solve_hydrogen(j[0], z, j[1], j[2], grid_ang, count=count,
                                     lam_max=lam_max, m_values=j[3]), jobs))
    rows = splitting_report(results)
    meta = {"Z": z, "radial_grids": [coarse_n, radial],
            "max_convergence_estimate": max(
                (r["convergence_estimate"] for r in rows
                 if r["convergence_estimate"] is not None), default=None)}
    return rows, meta


def run_selftest_rows():
    rows = run_selftest()
    return rows, {"all_passed": all(r["status"] == "pass" for r in rows)}
