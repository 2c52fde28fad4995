import math

import numpy as np
import pytest
from scipy import integrate
from scipy.stats import hypergeom

from glmg import (BlockSpec, ValidationError, covariance_matrix,
                  gaussian_eigenvalue_approx, hypergeometric_gaussian_approx,
                  moments_closed_form, rdm_spectrum)


class TestEigenvalueApprox:
    def test_peak_value(self):
        val = gaussian_eigenvalue_approx((0.5, 0.5), 100, 0.0, (50,))
        assert val == pytest.approx((2 * math.pi * 100 * 0.25) ** -0.5, rel=1e-13)

    def test_peak_matches_exact(self):
        exact = rdm_spectrum(BlockSpec(200, 100, (100, 100))).entries()[(50,)]
        approx = gaussian_eigenvalue_approx((0.5, 0.5), 100, 0.5, (50,))
        assert approx == pytest.approx(exact, rel=0.01)

    def test_rejects_vanishing_density(self):
        with pytest.raises(ValidationError):
            gaussian_eigenvalue_approx((1.0, 0.0), 100, 0.0, (50,))

    @pytest.mark.parametrize("m,density,L,alpha", [
        (1, (0.5, 0.5), 300.0, 0.0),
        (2, (0.4, 0.4, 0.2), 200.0, 0.5),
    ])
    def test_normalized_as_continuous_density(self, m, density, L, alpha):
        n = np.asarray(density)
        mu = L * n[:m]
        sigma = math.sqrt(L * (1 - alpha))
        span = 14 * sigma

        if m == 1:
            val, _ = integrate.quad(
                lambda x: gaussian_eigenvalue_approx(density, L, alpha, (x,)),
                mu[0] - span, mu[0] + span, epsabs=1e-10)
        else:
            val, _ = integrate.dblquad(
                lambda y, x: gaussian_eigenvalue_approx(density, L, alpha, (x, y)),
                mu[0] - span, mu[0] + span,
                lambda x: mu[1] - span, lambda x: mu[1] + span, epsabs=1e-9)
        assert val == pytest.approx(1.0, abs=1e-6)

    @pytest.mark.parametrize("m,n_sites", [(1, 1000), (1, 10000), (2, 1000), (2, 10000)])
    def test_uniform_density_error_bound(self, m, n_sites):
        # deviation from the exact eigenvalues, scaled by the peak, stays
        # below 5/sqrt(N) over the whole support at alpha = 1/2
        import warnings
        from glmg import RoundingTieWarning, finite_magnon_numbers
        dens = np.full(m + 1, 1.0 / (m + 1))
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RoundingTieWarning)
            magnons = finite_magnon_numbers(dens, n_sites)
        block = BlockSpec(n_sites, n_sites // 2, magnons)
        spec = rdm_spectrum(block)
        realized = np.asarray(magnons) / n_sites
        approx = gaussian_eigenvalue_approx(realized, block.L, 0.5, spec.indices)
        peak = gaussian_eigenvalue_approx(realized, block.L, 0.5,
                                          block.L * realized[:m][None, :])[0]
        assert np.abs(spec.values - approx).max() / peak <= 5.0 / math.sqrt(n_sites)


class TestCovarianceMatrix:
    def test_su2_closed_form(self):
        gm = covariance_matrix((0.5, 0.5), 80.0, 0.0)
        assert gm.coefficient_matrix[0, 0] == pytest.approx(4 / 80, rel=1e-13)
        assert gm.covariance[0, 0] == pytest.approx(80 / 4, rel=1e-13)

    def test_su3_uniform(self):
        gm = covariance_matrix((1 / 3, 1 / 3, 1 / 3), 9.0, 0.0)
        assert np.allclose(gm.coefficient_matrix, np.array([[2, 1], [1, 2]]) / 3, atol=1e-14)
        assert np.allclose(gm.covariance, np.array([[2, -1], [-1, 2]]), atol=1e-10)

    def test_inverse_pair(self):
        for dens in ((0.4, 0.4, 0.2), (0.7, 0.1, 0.1, 0.1), (0.25, 0.75)):
            gm = covariance_matrix(dens, 500.0, 0.25)
            m = len(dens) - 1
            assert np.abs(gm.coefficient_matrix @ gm.covariance - np.eye(m)).max() < 1e-10

    def test_matches_exact_moments_at_large_n(self):
        n_sites = 10 ** 4
        block = BlockSpec(n_sites, n_sites // 2,
                          (4 * n_sites // 10, 4 * n_sites // 10, 2 * n_sites // 10))
        mom = moments_closed_form(block)
        gm = covariance_matrix(block.densities(), block.L, 0.5)
        rel = np.abs(gm.covariance - mom.covariance) / np.abs(mom.covariance)
        assert rel.max() <= 2.0 / n_sites

    def test_means(self):
        gm = covariance_matrix((0.4, 0.4, 0.2), 50.0, 0.0)
        assert np.allclose(gm.means, [20.0, 20.0], atol=1e-12)

    def test_singular_densities_rejected(self):
        with pytest.raises(ValidationError):
            covariance_matrix((1.0, 0.0), 100.0, 0.0)


class TestHypergeometricApprox:
    def test_center_value(self):
        assert hypergeometric_gaussian_approx(200, 100, 100, 50) == pytest.approx(
            1 / math.sqrt(2 * math.pi * 12.5), rel=1e-13)

    def test_peak_formula(self):
        mu = 1000 * 0.3 * 0.4
        val = hypergeometric_gaussian_approx(1000, 300, 400, mu)
        sigma2 = 1000 * 0.3 * 0.7 * 0.4 * 0.6
        assert val == pytest.approx(1 / math.sqrt(2 * math.pi * sigma2), rel=1e-13)

    def test_symmetry_about_mean(self):
        mu = 200 * 0.5 * 0.5
        left = hypergeometric_gaussian_approx(200, 100, 100, mu - 7)
        right = hypergeometric_gaussian_approx(200, 100, 100, mu + 7)
        assert left == pytest.approx(right, rel=1e-13)

    def test_degenerate_rejected(self):
        with pytest.raises(ValidationError):
            hypergeometric_gaussian_approx(100, 0, 50, 0)
        with pytest.raises(ValidationError):
            hypergeometric_gaussian_approx(100, 50, 100, 50)

    @pytest.mark.parametrize("n_total,bound", [(200, 0.05), (1000, 0.02)])
    def test_total_variation(self, n_total, bound):
        draws = n_total // 2
        marked = n_total // 2
        l = np.arange(0, draws + 1)
        exact = hypergeom(n_total, marked, draws).pmf(l)
        approx = hypergeometric_gaussian_approx(n_total, marked, draws, l)
        assert 0.5 * np.abs(exact - approx).sum() <= bound

    def test_exact_side_against_rdm(self):
        # the m=1 eigenvalue distribution is the same hypergeometric law
        n_total, marked, draws = 60, 25, 30
        spec = rdm_spectrum(BlockSpec(n_total, draws, (marked, n_total - marked)))
        l = np.arange(0, draws + 1)
        pm = hypergeom(n_total, marked, draws).pmf(l)
        for idx, lam in spec.entries().items():
            assert lam == pytest.approx(pm[idx[0]], rel=1e-12)
