import math

import numpy as np
import pytest

from dirac_ab.errors import GridError
from dirac_ab.oracle import (RadialGrid, default_grid, extrapolated_eigenvalues,
                             fd_nonrel_eigenvalues, fd_radial_eigenvalues,
                             radial_operator_eigenvalues, required_r_max,
                             richardson_extrapolate, sturm_count,
                             tridiagonal_lowest_eigenvalues)
from dirac_ab.spectrum import (PhysicalParams, QuantumNumbers, Regularity, energy_level,
                               energy_nonrel, regular_radicand)


def P(alpha=0.3, s=1, M=1.0, omega=0.05):
    return PhysicalParams(M, omega, alpha, s)


class TestTridiagonal:
    def setup_method(self):
        rng = np.random.default_rng(11)
        self.d = rng.normal(size=60)
        self.e = rng.normal(size=59)
        self.full = np.linalg.eigvalsh(np.diag(self.d) + np.diag(self.e, 1) + np.diag(self.e, -1))

    def test_sturm_count_matches_dense(self):
        for x in (-2.0, 0.0, 0.7, 3.1):
            assert sturm_count(self.d, self.e, x) == int(np.sum(self.full < x))

    def test_lowest_eigenvalues(self):
        got = tridiagonal_lowest_eigenvalues(self.d, self.e, 6)
        assert np.allclose(got, self.full[:6], atol=1e-11)

    def test_free_laplacian(self):
        n = 200
        got = tridiagonal_lowest_eigenvalues(np.full(n, 2.0), np.full(n - 1, -1.0), 3)
        exact = 2 - 2 * np.cos(np.arange(1, 4) * np.pi / (n + 1))
        assert np.allclose(got, exact, atol=1e-12)

    def test_shape_checks(self):
        with pytest.raises(ValueError):
            tridiagonal_lowest_eigenvalues(np.ones(4), np.ones(4), 1)
        with pytest.raises(ValueError):
            tridiagonal_lowest_eigenvalues(np.ones(4), np.ones(3), 5)


class TestGrid:
    def test_minimum_points(self):
        with pytest.raises(GridError):
            RadialGrid(10.0, 99)

    def test_nonpositive_extent(self):
        with pytest.raises(GridError):
            RadialGrid(0.0, 200)

    def test_geometry(self):
        g = RadialGrid(10.0, 200)
        assert g.spacing == pytest.approx(0.05) and g.r_min == pytest.approx(0.025)
        assert g.refined().count == 400

    def test_too_short_domain(self):
        prm = P()
        with pytest.raises(GridError):
            radial_operator_eigenvalues(prm, 0, RadialGrid(5.0, 500), 2)

    def test_required_extent(self):
        prm = P()
        assert required_r_max(prm, 1, 4) == pytest.approx(
            8 * prm.length + math.sqrt((12 + 2 * 1.3 + 4) / prm.lam))

    def test_level_cap(self):
        prm = P()
        with pytest.raises(ValueError):
            radial_operator_eigenvalues(prm, 0, default_grid(prm, 0, 11), 11)


class TestRegularChannels:
    def test_ground_state_rest_mass(self):
        prm = PhysicalParams(1.0, 1.0, 0.0, 1)
        E_sq = extrapolated_eigenvalues(prm, 0, k=1)
        assert E_sq[0] == pytest.approx(1.0, rel=1e-9)

    def test_spin_up_channel(self):
        prm = P(0.5, 1)
        E_sq = extrapolated_eigenvalues(prm, 1, k=4)
        exact = [regular_radicand(prm, 1, n) for n in range(4)]
        assert np.allclose(E_sq, exact, rtol=1e-5)

    @pytest.mark.parametrize("s", [1, -1])
    def test_all_channels(self, s):
        prm = P(0.3, s)
        for m in range(-3, 4):
            E_sq = extrapolated_eigenvalues(prm, m, k=4, regularity=Regularity.REGULAR)
            exact = [regular_radicand(prm, m, n) for n in range(4)]
            assert np.allclose(E_sq, exact, rtol=1e-9)

    def test_second_order_convergence(self):
        prm = P(0.3, 1)
        exact = regular_radicand(prm, 0, 0)
        grid = default_grid(prm, 0, 1, 1000)
        errs = [abs(fd_radial_eigenvalues(prm, 0, g, 1)[0] - exact)
                for g in (grid, grid.refined(), grid.refined().refined())]
        orders = [math.log2(errs[i] / errs[i + 1]) for i in range(2)]
        assert all(1.8 <= p <= 2.2 for p in orders)
        assert errs[0] / errs[1] >= 3.5

    def test_spin_labels_share_operator_without_flux(self):
        # alpha = 0: the radial operator depends on |m| only, so the two spin
        # labels differ by the shift 4 M omega m
        up, down = P(0.0, 1), P(0.0, -1)
        a = extrapolated_eigenvalues(up, 2, k=3)
        b = extrapolated_eigenvalues(down, 2, k=3)
        assert np.allclose(a - b, 4 * up.lam * 2, rtol=1e-9)

    def test_liouville_scheme_degrades_for_small_order(self):
        prm = P(0.3, 1)
        exact = regular_radicand(prm, 0, 0) - prm.M ** 2 + 2 * prm.lam * (1 - 0.3)
        grid = default_grid(prm, 0, 1, 1000)
        errs = [abs(radial_operator_eigenvalues(prm, 0, g, 1, scheme="liouville")[0] - exact)
                for g in (grid, grid.refined())]
        assert math.log2(errs[0] / errs[1]) < 1.5

    def test_liouville_rejects_irregular(self):
        prm = P(2.3, -1)
        with pytest.raises(ValueError):
            radial_operator_eigenvalues(prm, -2, default_grid(prm, -2, 1), 1, scheme="liouville")

    def test_unknown_scheme(self):
        prm = P()
        with pytest.raises(ValueError):
            radial_operator_eigenvalues(prm, 0, default_grid(prm, 0, 1), 1, scheme="spectral")


class TestIrregularChannels:
    @pytest.mark.parametrize("alpha,s,m", [(2.3, -1, -2), (-1.25, 1, 1)])
    def test_modified_inner_boundary(self, alpha, s, m):
        prm = P(alpha, s)
        E_sq = extrapolated_eigenvalues(prm, m, k=4)
        for n in (1, 2, 3):
            exact = energy_level(prm, QuantumNumbers(m, n)).E
            assert math.sqrt(E_sq[n]) == pytest.approx(exact, rel=1e-6)

    def test_fraction_near_zero(self):
        # case B with xi = 0.05 has the strongly singular r^-0.95 behaviour
        prm = P(-1.95, 1)
        E_sq = extrapolated_eigenvalues(prm, 1, k=3)
        exact = [energy_level(prm, QuantumNumbers(1, n)).E ** 2 for n in (1, 2)]
        assert np.allclose(E_sq[1:], exact, rtol=1e-5)


class TestNonrelativistic:
    def test_spinless_ladder(self):
        prm = P(0.0, 1)
        eps = fd_nonrel_eigenvalues(prm, 0, k=4, spin_orbit=False)
        shifted = eps + prm.omega
        assert np.allclose(shifted, prm.omega * np.array([1, 3, 5, 7]), rtol=1e-5)
        assert np.allclose(np.diff(shifted), 2 * prm.omega, rtol=1e-4)

    def test_spin_orbit_ladder_matches_closed_form(self):
        prm = P(0.0, 1)
        eps = fd_nonrel_eigenvalues(prm, 0, k=4)
        assert np.allclose(eps, [energy_nonrel(prm, QuantumNumbers(0, n)) for n in range(4)],
                           atol=1e-6 * prm.omega)

    def test_case_a(self):
        prm = P(0.3, -1)
        grid = default_grid(prm, 0, 4)
        coarse = fd_nonrel_eigenvalues(prm, 0, grid, 4)
        fine = fd_nonrel_eigenvalues(prm, 0, grid.refined(), 4)
        eps = richardson_extrapolate(coarse, fine)
        exact = [prm.omega * (2 * n + 1 - 0.6) - prm.omega for n in range(4)]
        assert np.allclose(eps, exact, atol=1e-7)


class TestRichardson:
    def test_combination(self):
        assert richardson_extrapolate([1.0], [1.25])[0] == pytest.approx(4 / 3)

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            richardson_extrapolate([1.0, 2.0], [1.0])
