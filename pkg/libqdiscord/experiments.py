"""\
Seeded experiments behind the qdiscord subcommands.

Each cmd_* function takes an ExperimentConfig and returns a
filled CsvWriter. All numbers come from the library modules,
nothing is recomputed here.

Random streams of one seed are split by purpose, so the same
seed always yields the same Hamiltonian in every command:

	RngSeed(seed).derive(h)			Hamiltonian number h
	RngSeed(seed).derive(HAAR_STREAM)	Monte Carlo unitaries
	RngSeed(seed).derive(STATE_STREAM)	random test states
"""

from dataclasses import dataclass, field, asdict
import logging

import numpy as np

from libqdiscord.errors import ConfigError, DegenerateLocalState
from libqdiscord.errors import TimeAverageZero
from libqdiscord.operators import BipartiteDims, pure_state_z
from libqdiscord.linalg import eig_hermitian, hs_norm_sq
from libqdiscord.linalg import uncoupled_hamiltonian
from libqdiscord.dephasing import dephasing_basis, computational_basis
from libqdiscord.dephasing import local_dephase, geometric_discord
from libqdiscord.dephasing import product_state_conclusion
from libqdiscord.ensembles import sample_gue_hamiltonian, gibbs_state
from libqdiscord.ensembles import sample_density_matrix, GibbsParams
from libqdiscord.haar import haar_stats, haar_stats_from_delta
from libqdiscord.haar import gibbs_specialization
from libqdiscord.haar import monte_carlo_stats, median_band_fraction
from libqdiscord.dynamics import TimeGrid, witness_trajectory
from libqdiscord.dynamics import effective_dimension
from libqdiscord.fingerprint import matrix_fingerprint
from libqdiscord.CsvWriter import CsvWriter
from libqdiscord.RngSeed import RngSeed, RNG_IDENTITY

LOG = logging.getLogger(__name__)

HAAR_STREAM  = 1000001
STATE_STREAM = 1000002

DEFAULT_BETAS = (0.0, 0.1, 0.5, 1.0, 2.0)
STATE_KINDS   = ('pure-z', 'gibbs', 'random')


@dataclass
class ExperimentConfig:
	"""\
	Parameters of one experiment run. Only the fields used by a
	command matter for it, but all of them are echoed into the
	CSV metadata (except output, which is where the file goes,
	not what it contains).
	"""
	command: str
	da: int = 2
	db: int = 2
	beta: float = 1.0
	betas: tuple = DEFAULT_BETAS
	seed: int = 1
	t_end: float = 50.0
	n_points: int = 500
	n_samples: int = 2000
	n_hamiltonians: int = 10
	z: float = 0.5
	z_min: float = 0.0
	z_max: float = 1.0
	z_steps: int = 21
	state: str = 'pure-z'
	allow_degenerate: bool = False
	identical_pair: bool = False
	inject_uncoupled: bool = False
	require_convergence: bool = False
	convergence_threshold: float = 0.02
	workers: int = 1
	output: str = field(default='-', compare=False)


	def validate(self):
		"""\
		Raises:
		  ConfigError: If a parameter is out of range
		"""
		def need(cond, msg):
			if not cond:
				raise ConfigError(msg)

		need(self.da >= 2, "--da must be >= 2")
		need(self.db >= 1, "--db must be >= 1")
		need(self.da * self.db <= 64, "total dimension da*db must "\
			"not exceed 64")
		need(np.isfinite(self.beta) and self.beta >= 0,
			"--beta must be finite and >= 0")
		need(len(self.betas) > 0 and all(np.isfinite(b) and b >= 0
			for b in self.betas), "--betas must be finite and >= 0")
		need(0 <= self.seed < 2**64, "--seed must lie in [0, 2^64)")
		need(self.t_end > 0, "--t-end must be > 0")
		need(self.n_points >= 2, "--n-points must be >= 2")
		need(self.n_samples >= 2, "--n-samples must be >= 2")
		need(self.n_hamiltonians >= 1, "--n-hamiltonians must be >= 1")
		need(0 <= self.z <= 1, "--z must lie in [0, 1]")
		need(0 <= self.z_min < self.z_max <= 1,
			"need 0 <= --z-min < --z-max <= 1")
		need(self.z_steps >= 2, "--z-steps must be >= 2")
		need(self.state in STATE_KINDS, "--state must be one of "\
			+ ", ".join(STATE_KINDS))
		need(self.convergence_threshold > 0,
			"convergence threshold must be > 0")
		need(self.workers >= 1, "--workers must be >= 1")
		if self.command == 'haar-stats' and self.state == 'pure-z':
			need(self.da == 2 and self.db == 2,
				"--state pure-z needs --da 2 --db 2")


	def echo(self):
		"""\
		Config as dictionary for the CSV metadata.
		"""
		values = asdict(self)
		del values['output']
		values['betas'] = ";".join("{!r}".format(float(b))
				for b in self.betas)
		return values


	@property
	def dims(self):
		return BipartiteDims(self.da, self.db)

	@property
	def grid(self):
		return TimeGrid(self.t_end, self.n_points)


def _writer(cfg):
	w = CsvWriter(cfg.command)
	w.meta_dict(cfg.echo(), prefix='config.')
	w.meta('seed', cfg.seed)
	w.meta('rng', RNG_IDENTITY)
	return w


def hamiltonian(seed, dims, index=0):
	"""\
	GUE Hamiltonian number index of a seed.
	"""
	return sample_gue_hamiltonian(dims, RngSeed(seed).derive(index))


def _reference_state(rho, cfg, beta=None):
	"""\
	Dephased reference state of rho.

	At beta = 0 the Gibbs state is I/d, which every local
	dephasing leaves invariant, so its degenerate local state
	is accepted without --allow-degenerate.
	"""
	allow = cfg.allow_degenerate or beta == 0
	basis = dephasing_basis(rho)
	conclusion = product_state_conclusion(basis)
	if conclusion:
		LOG.info(conclusion)
	try:
		return local_dephase(rho, basis, allow), basis
	except DegenerateLocalState as e:
		raise DegenerateLocalState("{} (seed {})".format(e, cfg.seed))


def _gibbs_haar(delta, dims):
	# The qubit closed forms are used whenever they apply
	if dims.dA == 2 and dims.dB >= 2:
		spec = gibbs_specialization(dims.dB, delta)
		return spec.mu, spec.s2
	stats = haar_stats_from_delta(delta, dims)
	return stats.mu, stats.s2


def cmd_pure_state(cfg:ExperimentConfig):
	"""\
	Discord, Haar mean and variance along the pure state family
	|Psi_z> = sqrt(z)|00> + sqrt(1-z)|11>, dephased in the
	computational basis (the eigenbasis of rho_A for all z).

	Rows: z, D, mu, s2, sOverMu
	"""
	w = _writer(cfg)
	w.header('z', 'D', 'mu', 's2', 'sOverMu')
	for z in np.linspace(cfg.z_min, cfg.z_max, cfg.z_steps):
		rho = pure_state_z(float(z))
		basis = computational_basis(rho)
		rho_p = local_dephase(rho, basis, allow_degenerate=True)
		stats = haar_stats(rho, rho_p)
		d = geometric_discord(rho, basis, allow_degenerate=True)
		# product states at z = 0, 1 have no signal, report 0
		ratio = stats.s / stats.mu if stats.mu > 0 else 0.0
		w.row(float(z), d, stats.mu, stats.s2, ratio)
	return w


@dataclass
class GibbsRun:
	"""\
	Gibbs state of one Hamiltonian at one beta, its reference
	state, Haar prediction and witness trajectory.
	"""
	beta: float
	rho: object
	rho_prime: object
	basis: object
	discord: float
	mu: float
	s2: float
	trajectory: object

	@property
	def s(self):
		return float(np.sqrt(self.s2))


def gibbs_run(cfg, h, spectral, beta):
	params = GibbsParams(beta, cfg.dims)
	rho = gibbs_state(h, params, spectral)
	rho_p, basis = _reference_state(rho, cfg, beta)
	delta = rho.matrix - rho_p.matrix
	mu, s2 = _gibbs_haar(delta, cfg.dims)
	traj = witness_trajectory(rho, rho_p, h, cfg.grid,
			workers=cfg.workers, spectral=spectral)
	return GibbsRun(beta, rho, rho_p, basis, hs_norm_sq(delta), mu,
			s2, traj)


def cmd_gibbs(cfg:ExperimentConfig):
	"""\
	Witness trajectory of the Gibbs state of one GUE Hamiltonian.

	Metadata: discord, mu, s, d_eff, ...
	Rows: t, dist
	Raises:
	  DegenerateLocalState, NotConverged (--require-convergence)
	"""
	h = hamiltonian(cfg.seed, cfg.dims)
	spectral = eig_hermitian(h)
	run = gibbs_run(cfg, h, spectral, cfg.beta)
	traj = run.trajectory

	try:
		eff = effective_dimension(run.rho, run.rho_prime, h, cfg.grid,
				threshold=cfg.convergence_threshold,
				strict=cfg.require_convergence, trajectory=traj)
		d_eff = eff.d_eff
		converged = eff.diagnostics['converged']
		change = eff.diagnostics['relative_change']
	except TimeAverageZero as e:
		LOG.info(str(e))
		d_eff, converged, change = float('nan'), None, float('nan')

	w = _writer(cfg)
	w.meta('hamiltonian_sha256', matrix_fingerprint(h))
	w.meta('local_state_pure', run.basis.local_state_pure)
	w.meta('local_state_degenerate', run.basis.degenerate)
	w.meta('discord', run.discord)
	w.meta('mu', run.mu)
	w.meta('s2', run.s2)
	w.meta('s', run.s)
	w.meta('time_average', traj.time_average)
	w.meta('d_eff', d_eff)
	w.meta('converged', converged)
	w.meta('relative_change', change)
	w.header('t', 'dist')
	for t, v in zip(traj.times, traj.values):
		w.row(float(t), float(v))
	return w


def cmd_temperature_sweep(cfg:ExperimentConfig):
	"""\
	Witness trajectories of the Gibbs states of one fixed GUE
	Hamiltonian over a list of inverse temperatures, followed
	by a summary block (beta, D, mu, s).
	"""
	h = hamiltonian(cfg.seed, cfg.dims)
	spectral = eig_hermitian(h)
	fingerprint = matrix_fingerprint(h)

	w = _writer(cfg)
	w.meta('hamiltonian_sha256', fingerprint)
	runs = []
	for beta in cfg.betas:
		run = gibbs_run(cfg, h, spectral, float(beta))
		runs.append(run)

		w.block('trajectory')
		w.meta('beta', run.beta)
		w.meta('hamiltonian_sha256', fingerprint)
		w.meta('discord', run.discord)
		w.meta('mu', run.mu)
		w.meta('s', run.s)
		w.meta('time_average', run.trajectory.time_average)
		w.header('t', 'dist')
		for t, v in zip(run.trajectory.times, run.trajectory.values):
			w.row(float(t), float(v))
		LOG.info("beta={} D={:.6e} mu={:.6e}".format(run.beta,
			run.discord, run.mu))

	w.block('summary')
	w.header('beta', 'D', 'mu', 's')
	for run in runs:
		w.row(run.beta, run.discord, run.mu, run.s)
	return w


def _haar_state_pair(cfg):
	dims = cfg.dims
	if cfg.state == 'pure-z':
		rho = pure_state_z(cfg.z)
		basis = computational_basis(rho)
		rho_p = local_dephase(rho, basis, allow_degenerate=True)
		return rho, rho_p, None
	if cfg.state == 'gibbs':
		h = hamiltonian(cfg.seed, dims)
		rho = gibbs_state(h, GibbsParams(cfg.beta, dims))
		rho_p, _ = _reference_state(rho, cfg, cfg.beta)
		return rho, rho_p, h
	rho = sample_density_matrix(dims, RngSeed(cfg.seed).derive(STATE_STREAM))
	rho_p, _ = _reference_state(rho, cfg)
	return rho, rho_p, None


def cmd_haar_stats(cfg:ExperimentConfig):
	"""\
	Analytic Haar mean/variance against a Monte Carlo estimate.

	Rows: analyticMu, analyticS2, mcMean, mcVar, stdError,
	      nSamples, zScore
	"""
	rho, rho_p, h = _haar_state_pair(cfg)
	if cfg.identical_pair:
		rho_p = rho

	stats = haar_stats(rho, rho_p)
	mc = monte_carlo_stats(rho, rho_p, cfg.n_samples,
			RngSeed(cfg.seed).derive(HAAR_STREAM),
			workers=cfg.workers)
	if mc.std_error > 0:
		z_score = (mc.mean - stats.mu) / mc.std_error
	else:
		z_score = 0.0 if mc.mean == stats.mu else float('inf')

	w = _writer(cfg)
	if h is not None:
		w.meta('hamiltonian_sha256', matrix_fingerprint(h))
	w.meta('c1', stats.c1)
	w.meta('c2', stats.c2)
	w.meta('median_band_fraction', median_band_fraction(mc.samples,
			stats.mu, stats.s))
	w.header('analyticMu', 'analyticS2', 'mcMean', 'mcVar',
			'stdError', 'nSamples', 'zScore')
	w.row(stats.mu, stats.s2, mc.mean, mc.variance, mc.std_error,
			mc.n_samples, z_score)
	return w


def cmd_effective_dim(cfg:ExperimentConfig):
	"""\
	Effective environment dimension of n seeded GUE Hamiltonians
	(Gibbs state at --beta). With --inject-uncoupled an extra
	non-interacting Hamiltonian is appended, it must come out
	flagged as time_average_zero.

	Rows: hIndex, timeAverage, dEff, converged, status
	Summary block: medianDEff, nValid
	"""
	dims = cfg.dims
	cases = [(i, hamiltonian(cfg.seed, dims, i))
			for i in range(cfg.n_hamiltonians)]
	if cfg.inject_uncoupled:
		n = cfg.n_hamiltonians
		h_a = hamiltonian(cfg.seed, BipartiteDims(dims.dA, 1), n)
		h_b = hamiltonian(cfg.seed, BipartiteDims(dims.dB, 1), n + 1)
		cases.append((n, uncoupled_hamiltonian(h_a, h_b)))

	w = _writer(cfg)
	w.header('hIndex', 'timeAverage', 'dEff', 'converged', 'status')
	valid = []
	for index, h in cases:
		spectral = eig_hermitian(h)
		run = gibbs_run(cfg, h, spectral, cfg.beta)
		traj = run.trajectory
		try:
			eff = effective_dimension(run.rho, run.rho_prime, h,
					cfg.grid, threshold=cfg.convergence_threshold,
					strict=cfg.require_convergence, trajectory=traj)
		except TimeAverageZero:
			LOG.info("H #{}: time average vanishes".format(index))
			w.row(index, traj.time_average, float('nan'), None,
					'time_average_zero')
			continue
		valid.append(eff.d_eff)
		w.row(index, eff.time_average, eff.d_eff,
				eff.diagnostics['converged'], 'ok')

	w.block('summary')
	w.header('medianDEff', 'nValid')
	median = float(np.median(valid)) if valid else float('nan')
	w.row(median, len(valid))
	return w


COMMANDS = {
	'pure-state':        cmd_pure_state,
	'gibbs':             cmd_gibbs,
	'temperature-sweep': cmd_temperature_sweep,
	'haar-stats':        cmd_haar_stats,
	'effective-dim':     cmd_effective_dim,
}


def run(cfg:ExperimentConfig):
	"""\
	Validate cfg and run its command.
	Return:
	  CsvWriter
	"""
	cfg.validate()
	if cfg.command not in COMMANDS:
		raise ConfigError("Unknown command '{}'".format(cfg.command))
	LOG.info("running {} (dims {}, seed {})".format(cfg.command,
		cfg.dims, cfg.seed))
	return COMMANDS[cfg.command](cfg)
