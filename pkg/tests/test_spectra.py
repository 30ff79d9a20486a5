import numpy as np
import pytest

from helikin.basis import AngularGrid, MonopoleIndex
from helikin.errors import ConvergenceError
from helikin.screening import PotentialSpec, partial_wave_matrix_element
from helikin.spectra import (
    Channel,
    RadialGrid,
    RadialMapping,
    degeneracy_count,
    lifted_oscillator_levels,
    oscillator_energy,
    oscillator_wavefunction,
    solve_hydrogen,
    solve_radial_oscillator,
    splitting_report,
)
from helikin.spectra import _hydrogen_channel_matrix

ANG = AngularGrid.build(48, 33)


class TestRadialGrid:
    def test_rational_reproduces_gaussian_moment(self):
        grid = RadialGrid.rational(160, 1.0)
        assert grid.gaussian_moment() == pytest.approx(np.sqrt(np.pi) / 4, abs=1e-8)

    def test_linear_reproduces_gaussian_moment(self):
        # trapezoid error ~ (h^2/12) f'(p_min), so reach close to the origin
        grid = RadialGrid.linear(2000, 1e-4, 12.0)
        assert grid.gaussian_moment() == pytest.approx(np.sqrt(np.pi) / 4, abs=1e-8)

    def test_strictly_increasing_required(self):
        with pytest.raises(ValueError):
            RadialGrid(points=np.array([1.0, 1.0, 2.0]),
                       weights=np.array([1.0, 1.0, 1.0]),
                       mapping=RadialMapping.LINEAR)


class TestOscillatorEnergy:
    def test_spinless_ground_state(self):
        assert oscillator_energy(0, 0, 0.0) == pytest.approx(1.5, abs=1e-15)

    def test_helicity_ground_state(self):
        want = 1 + np.sqrt(3) / 2
        assert oscillator_energy(0, 0.5, 0.5) == pytest.approx(want, abs=1e-12)
        assert oscillator_energy(0, 0.5, 0.5) == pytest.approx(1.8660254, abs=1e-7)

    def test_helicity_excited_state(self):
        want = 3 + np.sqrt(15) / 2
        assert oscillator_energy(1, 1.5, 0.5) == pytest.approx(want, abs=1e-12)
        assert oscillator_energy(1, 1.5, 0.5) == pytest.approx(4.9364917, abs=1e-7)

    def test_rejects_invalid_numbers(self):
        with pytest.raises(ValueError):
            oscillator_energy(-1, 0, 0.0)
        with pytest.raises(ValueError):
            oscillator_energy(0, 0.5, 0.0)   # l must be integer when mu = 0
        with pytest.raises(ValueError):
            oscillator_energy(0, 1.0, 0.5)   # l must be half-odd when |mu| = 1/2


class TestOscillatorWavefunction:
    def test_nodeless_ground_states(self):
        p = np.linspace(1e-3, 8, 4000)
        for l in (0.5, 1.5, 2.5, 3.5):
            f = oscillator_wavefunction(0, l, p)
            assert np.all(f > 0)

    def test_node_count(self):
        p = np.linspace(1e-3, 10, 8000)
        f = oscillator_wavefunction(2, 0.5, p)
        signs = np.sign(f)
        changes = int(np.sum(signs[:-1] * signs[1:] < 0))
        assert changes == 2

    def test_fractional_index_identity(self):
        # l*(l*+1) = l(l+1) - 1/4 links the barrier to the fractional index
        for l in (0.5, 1.5, 2.5, 3.5):
            l_star = np.sqrt(l * (l + 1)) - 0.5
            assert l_star * (l_star + 1) == pytest.approx(l * (l + 1) - 0.25, abs=1e-14)


class TestSolveRadialOscillator:
    def test_spinless_levels(self):
        grid = RadialGrid.oscillator(2000, 12.0)
        res = solve_radial_oscillator(0, 0.0, grid, count=3)
        for v, e in enumerate(res.energies()):
            assert e == pytest.approx(2 * v + 1.5, abs=1e-4)
        assert res.metadata["tolerance_estimate"] < 1e-4

    def test_spinless_levels_fine_grid(self):
        # the second-order scheme reaches the 1e-5 level once h is small
        # enough (measured: the 2000-point grid only delivers ~7e-5 at v=2)
        grid = RadialGrid.oscillator(16000, 12.0)
        res = solve_radial_oscillator(0, 0.0, grid, count=3)
        for v, e in enumerate(res.energies()):
            assert e == pytest.approx(2 * v + 1.5, abs=1e-5)

    def test_helicity_levels(self):
        grid = RadialGrid.oscillator(3000, 14.0)
        res = solve_radial_oscillator(0.5, 0.5, grid, count=3)
        want = [oscillator_energy(v, 0.5, 0.5) for v in range(3)]
        assert res.energies() == pytest.approx(want, abs=1e-4)

    def test_second_order_convergence(self):
        # halving the spacing reduces the eigenvalue error ~4x (smooth channel)
        errs = []
        for n in (500, 1000, 2000):
            grid = RadialGrid.oscillator(n, 12.0)
            res = solve_radial_oscillator(1, 0.0, grid, count=1)
            errs.append(abs(res.energies()[0] - 2.5))
        assert 3.0 < errs[0] / errs[1] < 5.0
        assert 3.0 < errs[1] / errs[2] < 5.0

    def test_node_theorem(self):
        grid = RadialGrid.oscillator(1500, 14.0)
        res = solve_radial_oscillator(1.5, 0.5, grid, count=5)
        vs = sorted(c.v for c in res.channels)
        assert vs == [0, 1, 2, 3, 4]

    def test_variational_monotonicity(self):
        # enlarging the box never raises a converged eigenvalue beyond the
        # discretization tolerance
        h = 12.0 / 2401
        small = solve_radial_oscillator(0.5, 0.5, RadialGrid.oscillator(2400, 12.0), count=3)
        n_big = int(round(16.0 / h)) - 1
        big = solve_radial_oscillator(0.5, 0.5, RadialGrid.oscillator(n_big, n_big * h + h), count=3)
        tol = max(small.metadata["tolerance_estimate"], big.metadata["tolerance_estimate"])
        for e_small, e_big in zip(small.energies(), big.energies()):
            assert e_big <= e_small + tol

    def test_flags_bad_grids(self):
        with pytest.raises(ValueError):
            solve_radial_oscillator(0, 0.0, RadialGrid.oscillator(500, 3.0), count=6)
        with pytest.raises(ValueError):
            solve_radial_oscillator(0, 0.0, RadialGrid.linear(500, 2.0, 12.0), count=3)
        with pytest.raises(ValueError):
            solve_radial_oscillator(0, 0.0, RadialGrid.rational(200, 1.0), count=3)


class TestDegeneracy:
    def test_ground_shell(self):
        assert degeneracy_count(0) == 1

    def test_n2_shell(self):
        assert degeneracy_count(2) == 6

    def test_closed_form(self):
        for N in range(8):
            assert degeneracy_count(N) == (N + 1) * (N + 2) // 2

    def test_helicity_lifts_shell_coincidences(self):
        # E(v=1, l=1/2) and E(v=0, l=5/2) would share a spinless shell; the
        # helicity-sector gap |(2 + sqrt(3)/2 + 1) - (sqrt(35)/2 + 1)| = 0.092
        e1 = oscillator_energy(1, 0.5, 0.5)
        e2 = oscillator_energy(0, 2.5, 0.5)
        assert abs(e1 - e2) == pytest.approx(
            abs(2 + np.sqrt(3) / 2 + 1 - (np.sqrt(35) / 2 + 1)), abs=1e-12)
        assert abs(e1 - e2) > 0.09

    def test_no_near_coincidences_below_cap(self):
        levels = lifted_oscillator_levels(0.5, max_energy=14.0)
        energies = np.array([e for e, _, _ in levels])
        gaps = np.diff(np.sort(energies))
        assert np.all(gaps > 1e-6)

    def test_multiplicities_are_2l_plus_1(self):
        for e, l, mult in lifted_oscillator_levels(0.5, 10.0):
            assert mult == int(2 * l + 1)


class TestHydrogenSpinless:
    def test_rydberg_series_z1(self):
        grid = RadialGrid.rational(200, 1.0)
        res = solve_hydrogen(0.0, 1.0, 0, grid, ANG, count=3)
        got = res.energies()
        for e, n in zip(got, (1, 2, 3)):
            want = -0.5 / n**2
            assert abs(e - want) / abs(want) < 1e-3

    def test_rydberg_series_z2_l1(self):
        grid = RadialGrid.rational(200, 2.0)
        res = solve_hydrogen(0.0, 2.0, 1, grid, ANG, count=2)
        got = res.energies()
        for e, n in zip(got, (2, 3)):
            want = -4.0 / (2 * n**2)
            assert abs(e - want) / abs(want) < 1e-3

    def test_hermiticity_residual(self):
        grid = RadialGrid.rational(120, 1.0)
        res = solve_hydrogen(0.0, 1.0, 0, grid, ANG, count=1)
        assert res.metadata["hermiticity_residual"] < 1e-10

    def test_node_labels_match_principal_numbers(self):
        grid = RadialGrid.rational(160, 1.0)
        res = solve_hydrogen(0.0, 1.0, 0, grid, ANG, count=3)
        vs = sorted(c.v for c in res.channels)
        assert vs == [0, 1, 2]

    def test_spinless_screening_identity(self):
        # mu = 0 screening factor is identically 1 (exact ones, not just
        # approximately), so the screened assembly is bit-for-bit the
        # unscreened one, and repeated solves agree exactly on one grid
        from helikin.screening import screening_factor_grid
        th = np.linspace(0.1, np.pi - 0.1, 7)
        F = screening_factor_grid(0, th[:, None], th[None, :], 0.3)
        assert np.all(F == 1.0)
        grid = RadialGrid.rational(100, 1.0)
        idx = MonopoleIndex.of(0, 0, 0)
        H1, _ = _hydrogen_channel_matrix(1.0, idx, grid, ANG, lam_max=24)
        H2, _ = _hydrogen_channel_matrix(1.0, idx, grid, ANG, lam_max=24)
        assert np.array_equal(H1, H2)

    def test_rejects_small_grid(self):
        with pytest.raises(ValueError):
            solve_hydrogen(0.0, 1.0, 0, RadialGrid.rational(60, 1.0), ANG)

    def test_flags_underresolved_angular_grid(self):
        grid = RadialGrid.rational(100, 1.0)
        with pytest.raises(ConvergenceError):
            solve_hydrogen(0.5, 1.0, 0.5, grid, AngularGrid.build(16, 9),
                           count=1, lam_max=48)


class TestHydrogenHelicity:
    def test_bound_states_exist_and_converge(self):
        vals = []
        for n in (100, 150):
            grid = RadialGrid.rational(n, 1.0)
            res = solve_hydrogen(0.5, 1.0, 0.5, grid, ANG, count=2,
                                 m_values=[0.5])
            vals.append(res.energies(m=0.5))
        assert all(e < 0 for e in vals[-1])
        for a, b in zip(vals[0], vals[1]):
            assert abs(a - b) / abs(b) < 1e-3

    def test_dual_sector_mirror_symmetry(self):
        # E(mu, m) = E(-mu, -m) by conjugation of the screening factor
        grid = RadialGrid.rational(100, 1.0)
        plus = solve_hydrogen(0.5, 1.0, 0.5, grid, ANG, count=1, m_values=[0.5])
        minus = solve_hydrogen(-0.5, 1.0, 0.5, grid, ANG, count=1, m_values=[-0.5])
        assert plus.energies()[0] == pytest.approx(minus.energies()[0], rel=1e-12)

    def test_fast_kernel_matches_direct_quadrature(self):
        # dual route: the Legendre-expanded solver kernel against the brute
        # double angular quadrature of the screened potential
        grid = RadialGrid.rational(100, 1.0)
        idx = MonopoleIndex.of(0.5, 0.5, 0.5)
        H, _ = _hydrogen_channel_matrix(1.0, idx, grid, ANG, lam_max=48)
        pot = PotentialSpec.coulomb(1.0)
        i, j = 30, 55
        p_i, q_j = grid.points[i], grid.points[j]
        direct = partial_wave_matrix_element(idx, idx, p_i, q_j, pot,
                                             AngularGrid.build(40, 81))
        got = H[i, j] / (np.sqrt(grid.weights[i] * grid.weights[j]) * p_i * q_j)
        assert got == pytest.approx(direct.real, rel=2e-4)


class TestSplittingReport:
    def test_identical_inputs_zero_delta(self):
        grid = RadialGrid.oscillator(800, 12.0)
        res = solve_radial_oscillator(0.5, 0.5, grid, count=2)
        rows = splitting_report([res, res])
        assert rows
        for row in rows:
            assert row["delta"] == 0.0

    def test_oscillator_analytic_splitting(self):
        # (v=0, l=1, mu=0) against (v=0, l=1/2, mu=1/2):
        # delta = 1 + sqrt(3)/2 - 2.5
        g = RadialGrid.oscillator(3000, 14.0)
        r0 = solve_radial_oscillator(1, 0.0, g, count=2)
        rh = solve_radial_oscillator(0.5, 0.5, g, count=2)
        rows = splitting_report([r0, rh])
        row = next(r for r in rows if r["level"] == "v=0,l=0.5")
        want = (1 + np.sqrt(3) / 2) - 2.5
        assert row["delta"] == pytest.approx(want, abs=1e-3)
        assert row["delta"] == pytest.approx(-0.634, abs=1e-2)

    def test_rejects_mixed_problems(self):
        g = RadialGrid.oscillator(800, 12.0)
        osc = solve_radial_oscillator(0.5, 0.5, g, count=1)
        hyd = solve_hydrogen(0.0, 1.0, 0, RadialGrid.rational(100, 1.0), ANG, count=1)
        with pytest.raises(ValueError):
            splitting_report([osc, hyd])

    def test_hydrogen_refinement_convergence(self):
        coarse_g = RadialGrid.rational(100, 1.0)
        fine_g = RadialGrid.rational(150, 1.0)
        results = []
        for g in (coarse_g, fine_g):
            results.append(solve_hydrogen(0.0, 1.0, 1, g, ANG, count=1))
            results.append(solve_hydrogen(0.5, 1.0, 0.5, g, ANG, count=1,
                                          m_values=[0.5]))
        rows = splitting_report(results)
        row = rows[0]
        assert row["delta"] is not None
        assert row["convergence_estimate"] is not None
        assert row["convergence_estimate"] < 0.10
