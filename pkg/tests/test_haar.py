import numpy as np
from numpy.testing import assert_allclose, assert_array_equal
from pytest import mark, raises

from libqdiscord.errors import InvalidOperator, DimensionMismatch
from libqdiscord.operators import BipartiteDims
from libqdiscord.operators import pure_state_z
from libqdiscord.dephasing import local_dephase, computational_basis
from libqdiscord.ensembles import gibbs_state, GibbsParams
from libqdiscord.ensembles import sample_gue_hamiltonian
from libqdiscord.ensembles import sample_density_matrix
from libqdiscord.haar import haar_coefficients, haar_stats
from libqdiscord.haar import haar_stats_from_delta, haar_mean
from libqdiscord.haar import haar_variance, relative_fluctuation
from libqdiscord.haar import exact_relative_fluctuation
from libqdiscord.haar import gibbs_specialization, monte_carlo_stats
from libqdiscord.haar import median_band_fraction, MC_CHUNK
from libqdiscord.haar import clip_round_off
from libqdiscord.RngSeed import RngSeed


DIMS = [(2, 2), (2, 4), (2, 8), (3, 3)]


def pure_pair(z):
	rho = pure_state_z(z)
	return rho, local_dephase(rho, computational_basis(rho),
			allow_degenerate=True)


def unit_delta(dims):
	delta = np.zeros((dims.d, dims.d))
	delta[0, 0] = 1 / np.sqrt(2)
	delta[1, 1] = -1 / np.sqrt(2)
	return delta


class TestCoefficients:
	def test_two_qubits(self):
		c1, c2 = haar_coefficients(BipartiteDims(2, 2))
		assert_allclose(c1, 69 / 350, rtol=1e-14)
		assert_allclose(c2, -2 / 7, rtol=1e-14)

	def test_trivial_environment(self):
		assert haar_coefficients(BipartiteDims(3, 1)) == (0.0, 0.0)

	@mark.parametrize("da, db", [(2, 3), (3, 2), (2, 8), (4, 4)])
	def test_finite(self, da, db):
		c1, c2 = haar_coefficients(BipartiteDims(da, db))
		assert np.isfinite(c1) and np.isfinite(c2)
		assert c1 > 0 > c2


class TestPureStateFamily:
	@mark.parametrize("z", [0.1, 0.25, 0.5, 0.75])
	def test_closed_forms(self, z):
		rho, rho_p = pure_pair(z)
		stats = haar_stats(rho, rho_p)
		d = 2 * z * (1 - z)
		assert_allclose(stats.mu, 0.4 * d, atol=1e-12)
		assert_allclose(stats.s2, 38 / 175 * z**2 * (1 - z)**2,
				atol=1e-12)
		assert_allclose(stats.s / stats.mu, np.sqrt(19 / 56), atol=1e-12)
		assert_allclose(exact_relative_fluctuation(rho, rho_p),
				np.sqrt(19 / 56), atol=1e-12)

	def test_bell_state_mean(self):
		assert_allclose(haar_mean(*pure_pair(0.5)), 0.2, atol=1e-12)

	def test_coefficients_reproduce_variance(self):
		# c1 (Tr D^2)^2 + c2 Tr D^4 with D^2 = z(1-z) on a 2-dim block
		z = 0.3
		c1, c2 = haar_coefficients(BipartiteDims(2, 2))
		tr2 = 2 * z * (1 - z)
		tr4 = 2 * (z * (1 - z))**2
		assert_allclose(c1 * tr2**2 + c2 * tr4,
				38 / 175 * z**2 * (1 - z)**2, atol=1e-12)

	def test_product_state_endpoints(self):
		rho, rho_p = pure_pair(1.0)
		assert haar_variance(rho, rho_p) == 0.0
		assert np.isnan(exact_relative_fluctuation(rho, rho_p))


class TestHaarStats:
	def test_identical_pair(self, random_state):
		rho = random_state(2, 3)
		stats = haar_stats(rho, rho)
		assert stats.mu == 0.0 and stats.s2 == 0.0

	def test_qubit_large_environment(self):
		dims = BipartiteDims(2, 8)
		stats = haar_stats_from_delta(unit_delta(dims), dims)
		assert_allclose(stats.mu, 24 / 255, rtol=1e-13)

	def test_trivial_environment(self):
		dims = BipartiteDims(3, 1)
		stats = haar_stats_from_delta(unit_delta(dims), dims)
		assert_allclose(stats.mu, 1.0)
		assert stats.s2 == 0.0

	def test_dimension_mismatch(self, random_state):
		with raises(DimensionMismatch):
			haar_stats(random_state(2, 2), random_state(2, 3))

	def test_needs_two_levels(self):
		dims = BipartiteDims(1, 4)
		with raises(InvalidOperator):
			haar_stats_from_delta(np.zeros((4, 4)), dims)

	@mark.parametrize("c", [0.1, 0.5, 3.0])
	def test_homogeneity(self, random_state, c):
		rho = random_state(2, 3)
		delta = rho.matrix - local_dephase(rho).matrix
		base = haar_stats_from_delta(delta, rho.dims)
		scaled = haar_stats_from_delta(c * delta, rho.dims)
		assert_allclose(scaled.mu, c**2 * base.mu, rtol=1e-12)
		assert_allclose(scaled.s2, c**4 * base.s2, rtol=1e-10)

	@mark.parametrize("da, db", DIMS)
	def test_variance_non_negative(self, random_state, da, db):
		for _ in range(50):
			rho = random_state(da, db)
			assert haar_stats(rho, local_dephase(rho)).s2 > 0

	@mark.slow
	@mark.parametrize("da, db", DIMS)
	def test_variance_non_negative_sweep(self, random_state, da, db):
		for _ in range(1000):
			rho = random_state(da, db)
			assert haar_stats(rho, local_dephase(rho)).s2 >= 0

	def test_clip_round_off(self):
		assert clip_round_off(-1e-18, 1.0) == 0.0
		assert clip_round_off(-1e-3, 1.0) == -1e-3
		assert clip_round_off(2e-4, 1.0) == 2e-4
		assert clip_round_off(0.0, 0.0) == 0.0
		assert clip_round_off(-1e-30, 1e-16) == 0.0

	def test_relative_fluctuation(self):
		assert_allclose(relative_fluctuation(BipartiteDims(2, 8)),
				np.sqrt(2 / 3))
		assert_allclose(relative_fluctuation(BipartiteDims(10, 3)),
				np.sqrt(2 / 99))
		with raises(InvalidOperator):
			relative_fluctuation(BipartiteDims(1, 3))


class TestGibbsSpecialization:
	def test_two_qubits(self):
		rho, rho_p = pure_pair(0.25)
		delta = rho.matrix - rho_p.matrix
		spec = gibbs_specialization(2, delta)
		stats = haar_stats(rho, rho_p)
		assert_allclose(spec.mu, 0.4 * np.sum(np.abs(delta)**2))
		assert_allclose(spec.mu, stats.mu, atol=1e-14)
		assert_allclose(spec.s2, stats.s2, atol=1e-14)

	@mark.parametrize("db", range(2, 17))
	def test_random_delta(self, random_state, db):
		dims = BipartiteDims(2, db)
		rho = random_state(2, db)
		delta = rho.matrix - local_dephase(rho).matrix
		spec = gibbs_specialization(db, delta)
		stats = haar_stats_from_delta(delta, dims)
		assert_allclose(spec.mu, stats.mu, rtol=1e-10)
		assert_allclose(spec.s2, stats.s2, rtol=1e-8)

	@mark.parametrize("db", [3, 8])
	def test_matches_general_formula(self, db):
		dims = BipartiteDims(2, db)
		h = sample_gue_hamiltonian(dims, RngSeed(11))
		rho = gibbs_state(h, GibbsParams(1.0, dims))
		rho_p = local_dephase(rho)
		spec = gibbs_specialization(db, rho.matrix - rho_p.matrix)
		stats = haar_stats(rho, rho_p)
		assert_allclose(spec.mu, stats.mu, atol=1e-12)
		assert_allclose(spec.s2, stats.s2, atol=1e-12)

	def test_zero_delta(self):
		spec = gibbs_specialization(4, np.zeros((8, 8)))
		assert spec.mu == 0.0 and spec.s2 == 0.0

	def test_needs_environment(self):
		with raises(InvalidOperator):
			gibbs_specialization(1, np.zeros((2, 2)))


class TestMonteCarlo:
	def test_identical_pair(self, random_state):
		rho = random_state(2, 2)
		mc = monte_carlo_stats(rho, rho, 100, RngSeed(1))
		assert mc.mean == 0.0 and mc.variance == 0.0

	def test_bell_state(self):
		rho, rho_p = pure_pair(0.5)
		mc = monte_carlo_stats(rho, rho_p, 2000, RngSeed(2024))
		assert mc.n_samples == 2000 and len(mc.samples) == 2000
		assert abs(mc.mean - 0.2) < 3 * mc.std_error
		expect_var = 38 / 175 / 16
		assert abs(mc.variance - expect_var) < 0.2 * expect_var

	def test_median_band(self):
		rho, rho_p = pure_pair(0.5)
		stats = haar_stats(rho, rho_p)
		mc = monte_carlo_stats(rho, rho_p, 2000, RngSeed(5))
		assert median_band_fraction(mc.samples, stats.mu, stats.s) > 0.45

	@mark.parametrize("da, db", [(2, 3), (3, 2)])
	def test_random_state(self, da, db):
		dims = BipartiteDims(da, db)
		rho = sample_density_matrix(dims, RngSeed(3))
		rho_p = local_dephase(rho)
		stats = haar_stats(rho, rho_p)
		mc = monte_carlo_stats(rho, rho_p, 4000, RngSeed(4))
		assert abs(mc.mean - stats.mu) < 4 * mc.std_error
		assert abs(mc.variance - stats.s2) < 0.25 * stats.s2

	def test_workers_do_not_change_result(self):
		rho, rho_p = pure_pair(0.3)
		n = 2 * MC_CHUNK + 200
		a = monte_carlo_stats(rho, rho_p, n, RngSeed(8), workers=1)
		b = monte_carlo_stats(rho, rho_p, n, RngSeed(8), workers=3)
		assert_array_equal(a.samples, b.samples)
		assert a.mean == b.mean

	def test_two_samples(self):
		rho, rho_p = pure_pair(0.3)
		mc = monte_carlo_stats(rho, rho_p, 2, RngSeed(1))
		assert np.isfinite(mc.std_error)

	def test_generator_input(self, rng):
		rho, rho_p = pure_pair(0.3)
		mc = monte_carlo_stats(rho, rho_p, 10, rng)
		assert mc.n_samples == 10

	@mark.parametrize("n", [1, 0, 2.5])
	def test_invalid_count(self, n):
		rho, rho_p = pure_pair(0.3)
		with raises(InvalidOperator):
			monte_carlo_stats(rho, rho_p, n, RngSeed(1))

	@mark.slow
	def test_repeated_trials(self):
		rho, rho_p = pure_pair(0.5)
		expect_var = 38 / 175 / 16
		passed = 0
		for trial in range(100):
			mc = monte_carlo_stats(rho, rho_p, 2000, RngSeed(1000 + trial))
			if abs(mc.mean - 0.2) < 3 * mc.std_error \
					and abs(mc.variance - expect_var) < 0.2 * expect_var:
				passed += 1
		assert passed >= 95
