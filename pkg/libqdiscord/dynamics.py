"""\
Reduced dynamics witness.

Given a state rho and its dephased reference rho', both are
propagated with the same dynamics and compared on A only:

	dist(t) = ||Tr_B{U_t (rho - rho') U_t^dagger}||^2

dist(0) = 0 because dephasing keeps the marginal. Any t with
dist(t) > 0 proves that rho != rho', i.e. rho carries discord.
For general (dissipative) dynamics the propagator is replaced
by a trace preserving Kraus map Lambda_t.

The long-time average of dist(t) defines an effective
environment dimension d_eff through the Haar mean

	mu(d_eff) = (dA^2 d_eff - d_eff) / (dA^2 d_eff^2 - 1) ||Delta||^2

which for generic (ergodic-like) dynamics should be close to
the real dB.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
import logging

import numpy as np

from libqdiscord.tolerance import Tol
from libqdiscord.errors import InvalidOperator, TimeAverageZero
from libqdiscord.errors import NotConverged
from libqdiscord.operators import BipartiteDims, check_same_dims
from libqdiscord.linalg import trace_out_b, hs_norm_sq, trace_norm
from libqdiscord.linalg import eig_hermitian

LOG = logging.getLogger(__name__)

# Time points per block of witness_trajectory, bounds the
# (points, d, d) work arrays
TIME_BLOCK = 256


class TimeGrid:
	"""\
	Uniform time grid of n_points in [t_start, t_end].
	"""

	def __init__(self, t_end, n_points, t_start=0.0):
		if not (np.isfinite(t_start) and np.isfinite(t_end)):
			raise InvalidOperator("Time grid bounds must be finite")
		if t_start < 0:
			raise InvalidOperator("t_start must be >= 0, got {}"\
				.format(t_start))
		if t_end <= t_start:
			raise InvalidOperator("t_end ({}) must exceed t_start ({})"\
				.format(t_end, t_start))
		if int(n_points) != n_points or n_points < 2:
			raise InvalidOperator("n_points must be an integer >= 2, "\
				"got {}".format(n_points))
		self.t_start  = float(t_start)
		self.t_end    = float(t_end)
		self.n_points = int(n_points)

	@property
	def times(self):
		return np.linspace(self.t_start, self.t_end, self.n_points)

	def __repr__(self):
		return "TimeGrid([{}, {}], n={})".format(
			self.t_start, self.t_end, self.n_points)


@dataclass
class WitnessTrajectory:
	"""\
	dist(t) sampled on a time grid.
	"""
	times: np.ndarray
	values: np.ndarray
	dims: BipartiteDims
	time_average: float = field(init=False)

	def __post_init__(self):
		self.times  = np.asarray(self.times, dtype=np.float64)
		self.values = np.asarray(self.values, dtype=np.float64)
		if self.times.shape != self.values.shape:
			raise InvalidOperator("times and values differ in length")
		self.time_average = float(np.mean(self.values))

	def running_average(self):
		return running_average(self)


class KrausMap:
	"""\
	Trace preserving map Lambda(X) = sum_a K_a X K_a^dagger.
	"""

	def __init__(self, operators, dims:BipartiteDims):
		ops = np.array([np.asarray(k, dtype=np.complex128)
				for k in operators])
		if ops.ndim != 3 or ops.shape[1:] != (dims.d, dims.d):
			raise InvalidOperator("Kraus operators must be {0}x{0} "\
				"matrices, got shape {1}".format(dims.d, ops.shape))
		total = np.einsum('aki,akj->ij', ops.conj(), ops)
		dev = float(np.max(np.abs(total - np.eye(dims.d))))
		if dev >= Tol.UNIT:
			raise InvalidOperator("Kraus map is not trace "\
				"preserving (deviation {:.3e})".format(dev))
		ops.setflags(write=False)
		self.operators = ops
		self.dims = dims

	def apply(self, x):
		return np.einsum('aij,jk,alk->il', self.operators, x,
				self.operators.conj())

	def __len__(self):
		return len(self.operators)


def unitary_map(u):
	"""\
	Unitary channel as a one-element Kraus map {U}.
	"""
	return KrausMap([u.matrix], u.dims)


def depolarizing_map(dims:BipartiteDims):
	"""\
	Completely depolarizing map Lambda(X) = Tr(X) I/d, with
	Kraus operators |i><j|/sqrt(d).
	"""
	d = dims.d
	ops = np.zeros((d * d, d, d), dtype=np.complex128)
	for i in range(d):
		for j in range(d):
			ops[i * d + j, i, j] = 1.0 / np.sqrt(d)
	return KrausMap(ops, dims)


def witness_distance(rho, rho_prime, u):
	"""\
	dist = ||Tr_B{U (rho - rho') U^dagger}||^2 for one unitary.
	Raises:
	  DimensionMismatch
	"""
	dims = check_same_dims(rho, rho_prime, u)
	um = u.matrix
	x = um @ (rho.matrix - rho_prime.matrix) @ um.conj().T
	return hs_norm_sq(trace_out_b(x, dims))


def trace_norm_witness(rho, rho_prime, u):
	"""\
	Trace norm witness ||Tr_B{U (rho - rho') U^dagger}||_1^2.
	It never exceeds ||rho - rho'||_1^2 (contractivity).
	"""
	dims = check_same_dims(rho, rho_prime, u)
	um = u.matrix
	x = um @ (rho.matrix - rho_prime.matrix) @ um.conj().T
	return trace_norm(trace_out_b(x, dims)) ** 2


def witness_distance_kraus(rho, rho_prime, kmap:KrausMap):
	"""\
	dist = ||Tr_B{Lambda(rho - rho')}||^2 for a Kraus map.
	"""
	dims = check_same_dims(rho, rho_prime, kmap)
	x = kmap.apply(rho.matrix - rho_prime.matrix)
	return hs_norm_sq(trace_out_b(x, dims))


def _distances(delta_eig, spectral, times, dims):
	# delta_eig is Delta in the eigenbasis of H, where U_t is
	# diagonal: (U Delta U^dagger)_ij = Delta_ij e^{-i(l_i-l_j)t}
	lam = spectral.eigenvalues
	v = spectral.eigenvectors
	gaps = lam[:, np.newaxis] - lam[np.newaxis, :]
	rotated = delta_eig[np.newaxis] * np.exp(-1j * times[:, np.newaxis,
			np.newaxis] * gaps[np.newaxis])
	x = v[np.newaxis] @ rotated @ v.conj().T[np.newaxis]
	return hs_norm_sq(trace_out_b(x, dims))


def witness_trajectory(rho, rho_prime, h, grid:TimeGrid, workers=1,
		spectral=None):
	"""\
	dist(t) on a time grid for U_t = exp(-iHt).

	H is diagonalized once, all time points reuse the same
	eigen decomposition. The grid is split into contiguous
	blocks of at most TIME_BLOCK points, evaluated in a thread
	pool if workers > 1. Results are collected in grid order.

	Args:
	  rho, rho_prime: State and reference state
	  h:              HermitianOperator
	  grid:           TimeGrid
	  workers:        Number of threads
	  spectral:       Optional precomputed eig_hermitian(h)
	Return:
	  WitnessTrajectory
	"""
	dims = check_same_dims(rho, rho_prime, h)
	if spectral is None:
		spectral = eig_hermitian(h)
	v = spectral.eigenvectors
	delta_eig = v.conj().T @ (rho.matrix - rho_prime.matrix) @ v

	times = grid.times
	n_blocks = min(len(times), max(workers, -(-len(times) // TIME_BLOCK)))
	blocks = np.array_split(times, n_blocks)

	def run_block(t):
		return _distances(delta_eig, spectral, t, dims)

	if workers <= 1:
		parts = [run_block(t) for t in blocks]
	else:
		with ThreadPoolExecutor(max_workers=workers) as pool:
			parts = list(pool.map(run_block, blocks))
	values = np.concatenate(parts)

	traj = WitnessTrajectory(times, np.asarray(values), dims)
	LOG.debug("trajectory {}: avg={:.6e} max={:.6e}".format(
		grid, traj.time_average, float(np.max(traj.values))))
	return traj


def running_average(trajectory:WitnessTrajectory):
	"""\
	Running mean of dist(t) over the first k grid points,
	k = 1..n.
	"""
	values = trajectory.values
	return np.cumsum(values) / np.arange(1, len(values) + 1)


def invert_haar_mean(time_average, delta_norm_sq, d_a):
	"""\
	Solve mu(x) = time_average for the environment dimension x.

	Rearranged, mu(x) = time_average is the quadratic

	  avg dA^2 x^2 - (dA^2 - 1) ||Delta||^2 x - avg = 0

	whose positive root is returned (it always exceeds 1/dA).

	Args:
	  time_average:  Long-time average of dist(t), > 0
	  delta_norm_sq: ||rho - rho'||^2
	  d_a:           Dimension of A
	Return:
	  Effective dimension (real)
	Raises:
	  TimeAverageZero: If time_average < Tol.ZERO_SIGNAL
	"""
	if time_average < Tol.ZERO_SIGNAL:
		raise TimeAverageZero("Time average {:.3e} vanishes, no "\
			"effective dimension".format(time_average))
	a = time_average * d_a**2
	b = (d_a**2 - 1) * delta_norm_sq
	return float((b + np.sqrt(b * b + 4.0 * a * time_average)) / (2.0 * a))


@dataclass(frozen=True)
class EffectiveDimension:
	d_eff: float
	time_average: float
	diagnostics: dict


def effective_dimension(rho, rho_prime, h, grid:TimeGrid,
		threshold=Tol.CONVERGENCE, strict=True, workers=1,
		trajectory=None):
	"""\
	Effective environment dimension from the long-time average
	of dist(t).

	The infinite time limit is approximated by the grid. The
	average over the first half of the grid is compared with
	the full average, a relative change above threshold counts
	as not converged.

	Args:
	  rho, rho_prime: State and reference state
	  h:              Hamiltonian
	  grid:           TimeGrid
	  threshold:      Allowed relative change when halving t_end
	  strict:         Raise NotConverged instead of reporting
	  workers:        Threads for the trajectory
	  trajectory:     Reuse an already computed trajectory
	Return:
	  EffectiveDimension, diagnostics holds half_average,
	  relative_change, converged, threshold and delta_norm_sq
	Raises:
	  TimeAverageZero, NotConverged
	"""
	dims = check_same_dims(rho, rho_prime, h)
	if trajectory is None:
		trajectory = witness_trajectory(rho, rho_prime, h, grid,
				workers=workers)

	avg = trajectory.time_average
	delta_norm_sq = hs_norm_sq(rho.matrix - rho_prime.matrix)
	if avg < Tol.ZERO_SIGNAL:
		raise TimeAverageZero("Time average {:.3e} vanishes "\
			"(factorized dynamics or no discord)".format(avg))

	t = trajectory.times
	half = t <= t[0] + 0.5 * (t[-1] - t[0])
	half_avg = float(np.mean(trajectory.values[half]))
	change = abs(half_avg - avg) / avg
	converged = change < threshold

	diagnostics = {
		'half_average':    half_avg,
		'relative_change': change,
		'converged':       converged,
		'threshold':       threshold,
		'delta_norm_sq':   delta_norm_sq,
	}
	if not converged:
		msg = "Time average not converged: halving t_end changes "\
			"it by {:.2%} (threshold {:.2%})".format(change, threshold)
		if strict:
			raise NotConverged(msg, relative_change=change)
		LOG.warning(msg)

	d_eff = invert_haar_mean(avg, delta_norm_sq, dims.dA)
	LOG.debug("d_eff={:.6f} avg={:.6e} change={:.3%}".format(
		d_eff, avg, change))
	return EffectiveDimension(d_eff, avg, diagnostics)
