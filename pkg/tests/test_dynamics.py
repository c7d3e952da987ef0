import numpy as np
from numpy.testing import assert_allclose, assert_array_equal
from pytest import mark, raises

from libqdiscord.errors import InvalidOperator, DimensionMismatch
from libqdiscord.errors import TimeAverageZero, NotConverged
from libqdiscord.operators import BipartiteDims, UnitaryOperator
from libqdiscord.linalg import propagator, uncoupled_hamiltonian
from libqdiscord.linalg import hs_norm_sq, trace_norm, trace_out_b
from libqdiscord.dephasing import local_dephase, geometric_discord
from libqdiscord.dephasing import trace_norm_discord
from libqdiscord.ensembles import gibbs_state, GibbsParams
from libqdiscord.ensembles import sample_gue_hamiltonian
from libqdiscord.ensembles import sample_kraus_map
from libqdiscord.haar import haar_stats
from libqdiscord.dynamics import TimeGrid, KrausMap, WitnessTrajectory
from libqdiscord.dynamics import unitary_map, depolarizing_map
from libqdiscord.dynamics import witness_distance, trace_norm_witness
from libqdiscord.dynamics import witness_distance_kraus
from libqdiscord.dynamics import witness_trajectory, running_average
from libqdiscord.dynamics import invert_haar_mean, effective_dimension
from libqdiscord.RngSeed import RngSeed
from libqdiscord import dynamics


def gibbs_pair(seed, dims, beta=1.0):
	h = sample_gue_hamiltonian(dims, RngSeed(seed))
	rho = gibbs_state(h, GibbsParams(beta, dims))
	return h, rho, local_dephase(rho)


def haar_mean_of(d_b, d_a, delta_norm_sq):
	return (d_a**2 * d_b - d_b) / (d_a**2 * d_b**2 - 1) * delta_norm_sq


class TestTimeGrid:
	def test_points(self):
		grid = TimeGrid(2.0, 5)
		assert_allclose(grid.times, [0, 0.5, 1, 1.5, 2])

	@mark.parametrize("args", [(0.0, 10), (1.0, 1), (-1.0, 10),
			(np.inf, 10), (1.0, 2.5), (1.0, 10, 2.0)])
	def test_invalid(self, args):
		with raises(InvalidOperator):
			TimeGrid(*args)


class TestWitnessDistance:
	def test_identity(self, random_state, dims22):
		rho = random_state(2, 2)
		rho_p = local_dephase(rho)
		d = witness_distance(rho, rho_p, UnitaryOperator.identity(dims22))
		assert d < 1e-24

	def test_local_product(self, random_state, random_local_unitary):
		for _ in range(10):
			rho = random_state(2, 3)
			rho_p = local_dephase(rho)
			u = UnitaryOperator.local_product(random_local_unitary(2),
					random_local_unitary(3))
			assert witness_distance(rho, rho_p, u) < 1e-12

	def test_gibbs_brute_force(self):
		h, rho, rho_p = gibbs_pair(3, BipartiteDims(2, 2))
		u = propagator(h, 1.0).matrix
		x = u @ (rho.matrix - rho_p.matrix) @ u.conj().T
		reduced = np.zeros((2, 2), dtype=np.complex128)
		for i in range(2):
			for j in range(2):
				reduced[i, j] = x[2*i, 2*j] + x[2*i + 1, 2*j + 1]
		expect = np.sum(np.abs(reduced)**2)
		d = witness_distance(rho, rho_p, propagator(h, 1.0))
		assert d > 0
		assert_allclose(d, expect, atol=1e-12)

	def test_dimension_mismatch(self, random_state):
		rho = random_state(2, 2)
		with raises(DimensionMismatch):
			witness_distance(rho, rho,
				UnitaryOperator.identity(BipartiteDims(2, 3)))


class TestBounds:
	def test_random_sweep(self, rng, random_state, random_hamiltonian):
		for _ in range(500):
			da, db = [(2, 2), (2, 3), (3, 2)][rng.integers(3)]
			rho = random_state(da, db)
			rho_p = local_dephase(rho)
			u = propagator(random_hamiltonian(da, db),
					float(rng.uniform(0, 20)))
			dist = witness_distance(rho, rho_p, u)
			assert geometric_discord(rho) >= dist / (da * db) - 1e-14
			assert trace_norm_discord(rho) \
				>= trace_norm_witness(rho, rho_p, u) - 1e-12


class TestKraus:
	def test_unitary_channel(self, random_state, random_hamiltonian):
		rho = random_state(2, 2)
		rho_p = local_dephase(rho)
		u = propagator(random_hamiltonian(2, 2), 0.8)
		assert_allclose(witness_distance_kraus(rho, rho_p, unitary_map(u)),
				witness_distance(rho, rho_p, u), atol=1e-14)

	def test_unitary_channel_sweep(self, rng, random_state,
			random_hamiltonian):
		for _ in range(100):
			da, db = [(2, 2), (2, 3), (3, 2)][rng.integers(3)]
			rho = random_state(da, db)
			rho_p = local_dephase(rho)
			u = propagator(random_hamiltonian(da, db),
					float(rng.uniform(0, 20)))
			assert_allclose(witness_distance_kraus(rho, rho_p,
					unitary_map(u)), witness_distance(rho, rho_p, u),
					rtol=1e-10, atol=1e-14)

	def test_depolarizing(self, random_state, dims22):
		rho = random_state(2, 2)
		rho_p = local_dephase(rho)
		kmap = depolarizing_map(dims22)
		assert_allclose(kmap.apply(rho.matrix), np.eye(4) / 4, atol=1e-15)
		assert witness_distance_kraus(rho, rho_p, kmap) < 1e-24

	def test_random_map(self, random_state, dims22, seed):
		rho = random_state(2, 2)
		rho_p = local_dephase(rho)
		kmap = sample_kraus_map(dims22, 2, seed)
		delta = rho.matrix - rho_p.matrix
		out = sum(k @ delta @ k.conj().T for k in kmap.operators)
		expect = hs_norm_sq(trace_out_b(out, dims22))
		assert_allclose(witness_distance_kraus(rho, rho_p, kmap), expect,
				atol=1e-12)

	def test_not_trace_preserving(self, dims22):
		with raises(InvalidOperator):
			KrausMap([2 * np.eye(4)], dims22)
		with raises(InvalidOperator):
			KrausMap([np.eye(3)], dims22)


class TestTrajectory:
	def test_starts_at_zero(self):
		h, rho, rho_p = gibbs_pair(1, BipartiteDims(2, 2))
		traj = witness_trajectory(rho, rho_p, h, TimeGrid(20.0, 200))
		assert traj.values[0] < 1e-12
		assert np.max(traj.values) > 1e-8

	def test_matches_pointwise(self):
		h, rho, rho_p = gibbs_pair(2, BipartiteDims(2, 3))
		grid = TimeGrid(5.0, 11)
		traj = witness_trajectory(rho, rho_p, h, grid)
		for t, v in zip(grid.times, traj.values):
			assert_allclose(v, witness_distance(rho, rho_p,
					propagator(h, t)), atol=1e-13)

	def test_bounded(self):
		h, rho, rho_p = gibbs_pair(4, BipartiteDims(2, 2))
		traj = witness_trajectory(rho, rho_p, h, TimeGrid(50.0, 500))
		bound = 2 * hs_norm_sq(rho.matrix - rho_p.matrix)
		assert np.all(traj.values <= bound + 1e-14)

	def test_workers(self):
		h, rho, rho_p = gibbs_pair(5, BipartiteDims(2, 2))
		grid = TimeGrid(10.0, 101)
		a = witness_trajectory(rho, rho_p, h, grid, workers=1)
		b = witness_trajectory(rho, rho_p, h, grid, workers=4)
		assert_allclose(a.values, b.values, atol=1e-15)
		assert_array_equal(a.times, b.times)

	def test_time_blocks(self, monkeypatch):
		h, rho, rho_p = gibbs_pair(8, BipartiteDims(2, 3))
		grid = TimeGrid(10.0, 37)
		whole = witness_trajectory(rho, rho_p, h, grid)

		sizes = []
		distances = dynamics._distances

		def record(delta_eig, spectral, times, dims):
			sizes.append(len(times))
			return distances(delta_eig, spectral, times, dims)

		monkeypatch.setattr(dynamics, 'TIME_BLOCK', 5)
		monkeypatch.setattr(dynamics, '_distances', record)
		blocked = witness_trajectory(rho, rho_p, h, grid)
		assert sum(sizes) == 37
		assert max(sizes) <= 5
		assert_allclose(blocked.values, whole.values, atol=1e-15)

		sizes.clear()
		witness_trajectory(rho, rho_p, h, TimeGrid(1.0, 3), workers=8)
		assert sizes == [1, 1, 1]

	def test_uncoupled(self, random_state, random_hamiltonian):
		grid = TimeGrid(30.0, 60)
		for _ in range(100):
			h = uncoupled_hamiltonian(random_hamiltonian(2, 1),
					random_hamiltonian(2, 1))
			rho = random_state(2, 2)
			rho_p = local_dephase(rho)
			traj = witness_trajectory(rho, rho_p, h, grid)
			assert np.all(traj.values < 1e-12)

	def test_running_average(self):
		traj = WitnessTrajectory([0, 1, 2, 3], [0.0, 2.0, 4.0, 2.0],
				BipartiteDims(2, 2))
		assert_allclose(running_average(traj), [0, 1, 2, 2])
		assert_allclose(traj.running_average()[-1], traj.time_average)

	def test_length_mismatch(self, dims22):
		with raises(InvalidOperator):
			WitnessTrajectory([0, 1], [0.0], dims22)


class TestEffectiveDimension:
	@mark.parametrize("d_a", [2, 3])
	def test_inversion_round_trip(self, d_a):
		for d_b in range(2, 33):
			avg = haar_mean_of(d_b, d_a, 0.37)
			assert_allclose(invert_haar_mean(avg, 0.37, d_a), d_b,
					atol=1e-9)

	def test_zero_average(self):
		with raises(TimeAverageZero):
			invert_haar_mean(0.0, 0.5, 2)

	def test_uncoupled(self, random_hamiltonian):
		h = uncoupled_hamiltonian(random_hamiltonian(2, 1),
				random_hamiltonian(3, 1))
		rho = gibbs_state(h, GibbsParams(1.0, h.dims))
		rho_p = local_dephase(rho)
		with raises(TimeAverageZero):
			effective_dimension(rho, rho_p, h, TimeGrid(20.0, 100))

	def test_not_converged(self):
		h, rho, rho_p = gibbs_pair(6, BipartiteDims(2, 2))
		grid = TimeGrid(0.1, 20)
		with raises(NotConverged) as e:
			effective_dimension(rho, rho_p, h, grid)
		assert e.value.relative_change > 0.02

		eff = effective_dimension(rho, rho_p, h, grid, strict=False)
		assert not eff.diagnostics['converged']
		assert eff.diagnostics['relative_change'] > 0.02

	def test_reuses_trajectory(self):
		h, rho, rho_p = gibbs_pair(7, BipartiteDims(2, 2))
		grid = TimeGrid(200.0, 2000)
		traj = witness_trajectory(rho, rho_p, h, grid)
		eff = effective_dimension(rho, rho_p, h, grid, strict=False,
				trajectory=traj)
		assert eff.time_average == traj.time_average
		assert eff.d_eff > 0.5
		assert_allclose(eff.diagnostics['delta_norm_sq'],
				hs_norm_sq(rho.matrix - rho_p.matrix))

	@mark.slow
	def test_ergodic_hypothesis(self):
		dims = BipartiteDims(2, 8)
		grid = TimeGrid(400.0, 4000)
		d_eff = []
		for seed in range(10):
			h, rho, rho_p = gibbs_pair(seed, dims)
			eff = effective_dimension(rho, rho_p, h, grid, strict=False)
			d_eff.append(eff.d_eff)
		assert 4 <= np.median(d_eff) <= 16

	@mark.slow
	@mark.parametrize("d_b", [4, 8])
	def test_haar_band(self, d_b):
		dims = BipartiteDims(2, d_b)
		grid = TimeGrid(400.0, 4000)
		inside = 0
		for seed in range(50):
			h, rho, rho_p = gibbs_pair(100 + seed, dims)
			stats = haar_stats(rho, rho_p)
			avg = witness_trajectory(rho, rho_p, h, grid).time_average
			if abs(avg - stats.mu) <= 2 * stats.s:
				inside += 1
		assert inside >= 40


class TestGibbsWitness:
	@mark.slow
	def test_discord_detected(self):
		grid = TimeGrid(50.0, 500)
		detected = 0
		for seed in range(100):
			h, rho, rho_p = gibbs_pair(seed, BipartiteDims(2, 2))
			traj = witness_trajectory(rho, rho_p, h, grid)
			assert traj.values[0] < 1e-12
			if np.max(traj.values) > 0:
				detected += 1
		assert detected >= 99

	def test_infinite_temperature(self, random_hamiltonian):
		h = random_hamiltonian(2, 2)
		rho = gibbs_state(h, GibbsParams(0.0, h.dims))
		rho_p = local_dephase(rho, allow_degenerate=True)
		assert geometric_discord(rho, allow_degenerate=True) < 1e-12
		traj = witness_trajectory(rho, rho_p, h, TimeGrid(10.0, 50))
		assert np.all(traj.values < 1e-12)
