"""\
Haar averages of the reduced distance observable

	F(U) = ||Tr_B{U Delta U^dagger}||^2,   Delta = rho - rho'

over U distributed with the Haar measure on U(dA dB).

Closed forms (n = dA^2 dB^2):

	mu  = (dA^2 dB - dB) / (n - 1) * ||Delta||^2

	s^2 = c1 (Tr Delta^2)^2 + c2 Tr Delta^4

	c1  = 2 (15 - 4n + n^2)(dA^2 - 1)(dB^2 - 1)
	      / ((36 - 13n + n^2)(n - 1)^2)

	c2  = -10 dA dB (dB^2 - 1)(dA^2 - 1)
	      / (n (n - 7)^2 - 36)

For dB = 1 the partial trace is the identity, F(U) = ||Delta||^2
for every U and the variance vanishes (both denominators of c1
and c2 vanish there too, so this case is handled separately).

The Monte Carlo estimator samples the same observable for
cross validation.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
import logging

import numpy as np

from libqdiscord.tolerance import Tol
from libqdiscord.errors import InvalidOperator
from libqdiscord.operators import BipartiteDims, check_same_dims
from libqdiscord.linalg import trace_out_b, hs_norm_sq
from libqdiscord.ensembles import sample_haar_unitaries, as_generator
from libqdiscord.RngSeed import RngSeed

LOG = logging.getLogger(__name__)

# Samples per independent Monte Carlo stream
MC_CHUNK = 500


@dataclass(frozen=True)
class HaarStats:
	mu: float
	s2: float
	c1: float
	c2: float
	dims: BipartiteDims

	@property
	def s(self):
		return float(np.sqrt(self.s2))


def haar_coefficients(dims:BipartiteDims):
	"""\
	Variance coefficients c1, c2 for the given dimensions,
	evaluated from the factored forms.
	"""
	if dims.dB == 1:
		return 0.0, 0.0
	da2 = float(dims.dA)**2
	db2 = float(dims.dB)**2
	n = da2 * db2
	c1 = 2.0 * (15.0 - 4.0*n + n*n) * (da2 - 1.0) * (db2 - 1.0) \
		/ ((36.0 - 13.0*n + n*n) * (n - 1.0)**2)
	c2 = -10.0 * dims.dA * dims.dB * (db2 - 1.0) * (da2 - 1.0) \
		/ (n * (n - 7.0)**2 - 36.0)
	return c1, c2


def _check_delta(delta, dims):
	delta = np.asarray(delta, dtype=np.complex128)
	if delta.shape != (dims.d, dims.d):
		raise InvalidOperator("Difference matrix of shape {} does "\
			"not match dims {}".format(delta.shape, dims))
	if dims.dA < 2:
		raise InvalidOperator("Haar statistics need dA >= 2, got {}"\
			.format(dims))
	return delta


def clip_round_off(s2, norm2):
	"""\
	Set a variance that is negative by round-off only to 0.
	Anything more negative is returned unchanged. A Delta with
	||Delta||^2 below Tol.ZERO_SIGNAL is round-off itself, its
	variance is always clipped at 0.
	Args:
	  s2:    Variance from the closed form
	  norm2: ||Delta||^2
	"""
	if norm2 < Tol.ZERO_SIGNAL:
		return max(s2, 0.0)
	if s2 < 0.0:
		if s2 >= -Tol.VAR_ROUND_OFF * norm2 * norm2:
			return 0.0
		LOG.warning("Haar variance is negative: {:.6e}".format(s2))
	return s2


def haar_stats_from_delta(delta, dims:BipartiteDims):
	"""\
	Mean and variance of F(U) for a difference matrix Delta.
	Return:
	  HaarStats
	"""
	delta = _check_delta(delta, dims)
	da2 = float(dims.dA)**2
	db = float(dims.dB)
	tr2 = hs_norm_sq(delta)		 # Tr Delta^2 (Delta Hermitian)
	tr4 = hs_norm_sq(delta @ delta)	 # Tr Delta^4

	mu = (da2 * db - db) / (da2 * db * db - 1.0) * tr2
	c1, c2 = haar_coefficients(dims)
	s2 = c1 * tr2 * tr2 + c2 * tr4
	return HaarStats(mu=mu, s2=clip_round_off(s2, tr2), c1=c1, c2=c2,
			dims=dims)


def haar_stats(rho, rho_prime):
	"""\
	HaarStats of the state pair (rho, rho').
	Raises:
	  DimensionMismatch
	"""
	dims = check_same_dims(rho, rho_prime)
	return haar_stats_from_delta(rho.matrix - rho_prime.matrix, dims)


def haar_mean(rho, rho_prime):
	"""\
	Haar mean mu of ||Tr_B{U (rho - rho') U^dagger}||^2.
	"""
	return haar_stats(rho, rho_prime).mu


def haar_variance(rho, rho_prime):
	"""\
	Haar variance s^2 of ||Tr_B{U (rho - rho') U^dagger}||^2.
	Use haar_stats() for c1 and c2.
	"""
	return haar_stats(rho, rho_prime).s2


def relative_fluctuation(dims:BipartiteDims):
	"""\
	Large-dB approximation s/mu ~ sqrt(2/(dA^2 - 1)).
	It only depends on dA and falls off like 1/dA.
	"""
	if dims.dA < 2:
		raise InvalidOperator("relative_fluctuation needs dA >= 2")
	return float(np.sqrt(2.0 / (dims.dA**2 - 1.0)))


def exact_relative_fluctuation(rho, rho_prime):
	"""\
	Exact s/mu of a state pair from the full formulas.
	Return:
	  s/mu, nan if mu = 0
	"""
	stats = haar_stats(rho, rho_prime)
	if stats.mu == 0.0:
		return float('nan')
	return stats.s / stats.mu


@dataclass(frozen=True)
class GibbsSpecialization:
	mu: float
	s2: float


def gibbs_specialization(d_b:int, delta):
	"""\
	Closed forms for a qubit system (dA = 2) coupled to a dB
	dimensional environment:

	  mu  = 3 dB / (4 dB^2 - 1) ||Delta||^2
	  s^2 = 3 (15 - 16 dB^2 + 16 dB^4)
	        / (2 (1 - 4 dB^2)^2 (4 dB^2 - 9)) ||Delta||^4
	        - 15 dB / (9 - 40 dB^2 + 16 dB^4) Tr Delta^4

	These agree with the general formulas at dA = 2. The
	common factor (dB^2 - 1) has been cancelled, so dB >= 2.

	Args:
	  d_b:   Environment dimension
	  delta: 2dB x 2dB difference matrix
	Return:
	  GibbsSpecialization
	"""
	if int(d_b) != d_b or d_b < 2:
		raise InvalidOperator("gibbs_specialization needs dB >= 2, "\
			"got {}".format(d_b))
	dims = BipartiteDims(2, int(d_b))
	delta = _check_delta(delta, dims)
	db = float(d_b)
	db2 = db * db
	norm2 = hs_norm_sq(delta)
	tr4 = hs_norm_sq(delta @ delta)

	mu = 3.0 * db / (4.0 * db2 - 1.0) * norm2
	s2 = 3.0 * (15.0 - 16.0*db2 + 16.0*db2*db2) \
		/ (2.0 * (1.0 - 4.0*db2)**2 * (4.0*db2 - 9.0)) * norm2 * norm2 \
		- 15.0 * db / (9.0 - 40.0*db2 + 16.0*db2*db2) * tr4
	return GibbsSpecialization(mu=mu, s2=clip_round_off(s2, norm2))


@dataclass(frozen=True)
class MonteCarloStats:
	mean: float
	variance: float
	std_error: float
	n_samples: int
	samples: np.ndarray = field(repr=False, compare=False)


def observable_samples(delta, dims:BipartiteDims, n:int, rng):
	"""\
	F(U) for n Haar unitaries drawn from rng.
	"""
	u = sample_haar_unitaries(dims.d, n, rng)
	x = u @ delta[np.newaxis] @ np.conj(np.swapaxes(u, -1, -2))
	return np.atleast_1d(hs_norm_sq(trace_out_b(x, dims)))


def monte_carlo_stats(rho, rho_prime, n_samples:int, rng, workers=1):
	"""\
	Empirical mean and variance of F(U) over Haar samples.

	Samples are drawn in chunks of MC_CHUNK, chunk k from the
	stream rng.derive(k). The result does not depend on the
	number of workers and chunks are reduced in order.

	Args:
	  rho, rho_prime: State pair
	  n_samples:      Number of unitaries, >= 2
	  rng:            RngSeed (a Generator is turned into a
	                  seed by drawing one 64-bit integer)
	  workers:        Threads
	Return:
	  MonteCarloStats (unbiased variance, std_error of the mean)
	"""
	dims = check_same_dims(rho, rho_prime)
	if int(n_samples) != n_samples or n_samples < 2:
		raise InvalidOperator("n_samples must be an integer >= 2, "\
			"got {}".format(n_samples))
	if not isinstance(rng, RngSeed):
		rng = RngSeed(int(as_generator(rng).integers(0, 2**63)))

	delta = rho.matrix - rho_prime.matrix
	sizes = [MC_CHUNK] * (n_samples // MC_CHUNK)
	if n_samples % MC_CHUNK:
		sizes.append(n_samples % MC_CHUNK)

	def run_chunk(k):
		return observable_samples(delta, dims, sizes[k], rng.derive(k))

	if workers <= 1:
		parts = [run_chunk(k) for k in range(len(sizes))]
	else:
		with ThreadPoolExecutor(max_workers=workers) as pool:
			parts = list(pool.map(run_chunk, range(len(sizes))))

	samples = np.concatenate(parts)
	mean = float(np.mean(samples))
	var = float(np.var(samples, ddof=1))
	stats = MonteCarloStats(mean=mean, variance=var,
			std_error=float(np.sqrt(var / n_samples)),
			n_samples=int(n_samples), samples=samples)
	LOG.debug("monte carlo {}: mean={:.6e} var={:.6e} n={}".format(
		dims, mean, var, n_samples))
	return stats


def median_band_fraction(samples, mu, s):
	"""\
	Fraction of samples above mu - s. The median of any random
	variable lies within mu +- s, so this is >= 1/2 up to
	sampling noise.
	"""
	samples = np.asarray(samples)
	return float(np.mean(samples > mu - s))
