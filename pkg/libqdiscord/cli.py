import argparse
import logging
import sys

from libqdiscord.tolerance import QDISCORD_TOOL, QDISCORD_VERSION
from libqdiscord.errors import QDiscordError
from libqdiscord.Config import Config
from libqdiscord.experiments import ExperimentConfig, COMMANDS, run
from libqdiscord.experiments import DEFAULT_BETAS, STATE_KINDS

"""\
qdiscord command line tool.

	qdiscord <command> [options]

Commands: pure-state, gibbs, temperature-sweep, haar-stats,
effective-dim. Results are written as CSV to --output (default
stdout), log messages go to stderr and the optional logfile.

Exit codes:
  0  success
  2  invalid config / input
  3  degenerate local state without --allow-degenerate
  4  time average not converged (--require-convergence)
"""

LOG = logging.getLogger('libqdiscord')


def _float_list(text):
	try:
		return tuple(float(x) for x in text.split(',') if x.strip())
	except ValueError:
		raise argparse.ArgumentTypeError("Expected comma separated "\
			"floats, got '{}'".format(text))


def make_parser():
	parser = argparse.ArgumentParser(prog=QDISCORD_TOOL,
		description="Local detection of quantum discord through "\
			"reduced dynamics")
	parser.add_argument('command', choices=list(COMMANDS))

	parser.add_argument('--da', type=int, default=2,
		help="dimension of the probed subsystem A")
	parser.add_argument('--db', type=int, default=2,
		help="dimension of the environment B")
	parser.add_argument('--beta', type=float, default=1.0,
		help="inverse temperature of the Gibbs state")
	parser.add_argument('--betas', type=_float_list,
		default=DEFAULT_BETAS,
		help="comma separated betas (temperature-sweep)")
	parser.add_argument('--seed', type=int, default=None)
	parser.add_argument('--t-end', type=float, default=None)
	parser.add_argument('--n-points', type=int, default=None)
	parser.add_argument('--n-samples', type=int, default=None,
		help="Monte Carlo samples (haar-stats)")
	parser.add_argument('--n-hamiltonians', type=int, default=None,
		help="number of Hamiltonians (effective-dim)")
	parser.add_argument('--z', type=float, default=0.5,
		help="state parameter for haar-stats --state pure-z")
	parser.add_argument('--z-min', type=float, default=0.0)
	parser.add_argument('--z-max', type=float, default=1.0)
	parser.add_argument('--z-steps', type=int, default=21)
	parser.add_argument('--state', choices=STATE_KINDS,
		default='pure-z', help="state family for haar-stats")
	parser.add_argument('--allow-degenerate', action='store_true',
		help="dephase in the tie-broken basis of a degenerate "\
			"local state")
	parser.add_argument('--identical-pair', action='store_true',
		help="haar-stats with rho' = rho (must give zero)")
	parser.add_argument('--inject-uncoupled', action='store_true',
		help="append a non-interacting Hamiltonian "\
			"(effective-dim)")
	parser.add_argument('--require-convergence', action='store_true',
		help="fail with exit code 4 if the time average did "\
			"not converge")
	parser.add_argument('--workers', type=int, default=None)
	parser.add_argument('--output', '-o', default='-',
		help="output file, '-' for stdout")
	parser.add_argument('--config', default=None,
		help="config file (default ~/.qdiscord/config.txt)")
	parser.add_argument('--loglevel', default=None,
		help="error, warning, info or debug")
	parser.add_argument('--version', action='version',
		version="{} {}".format(QDISCORD_TOOL, QDISCORD_VERSION))
	return parser


def init_logging(conf:Config):
	"""\
	Log to stderr and, if configured, to a logfile.
	"""
	for h in list(LOG.handlers):
		LOG.removeHandler(h)
		h.close()

	formatter = logging.Formatter(conf.logformat, '%H:%M:%S')

	sh = logging.StreamHandler(sys.stderr)
	sh.setLevel(conf.loglevel)
	sh.setFormatter(formatter)
	LOG.addHandler(sh)

	if conf.logfile:
		fh = logging.FileHandler(conf.logfile, mode='w')
		fh.setLevel(conf.loglevel)
		fh.setFormatter(formatter)
		LOG.addHandler(fh)

	LOG.setLevel(conf.loglevel)
	LOG.propagate = False


def _pick(flag, default):
	return default if flag is None else flag


def experiment_config(args, conf:Config):
	"""\
	Merge command line arguments over the config file values.
	"""
	return ExperimentConfig(
		command=args.command,
		da=args.da,
		db=args.db,
		beta=args.beta,
		betas=tuple(args.betas),
		seed=_pick(args.seed, conf.seed),
		t_end=_pick(args.t_end, conf.t_end),
		n_points=_pick(args.n_points, conf.n_points),
		n_samples=_pick(args.n_samples, conf.n_samples),
		n_hamiltonians=_pick(args.n_hamiltonians, conf.n_hamiltonians),
		z=args.z,
		z_min=args.z_min,
		z_max=args.z_max,
		z_steps=args.z_steps,
		state=args.state,
		allow_degenerate=args.allow_degenerate,
		identical_pair=args.identical_pair,
		inject_uncoupled=args.inject_uncoupled,
		require_convergence=args.require_convergence,
		convergence_threshold=conf.convergence_threshold,
		workers=_pick(args.workers, conf.workers),
		output=args.output)


def main(argv=None):
	"""\
	Run the command line tool.
	Args:
	  argv: Arguments without program name (default sys.argv[1:])
	Return:
	  Exit code
	"""
	try:
		args = make_parser().parse_args(argv)
	except SystemExit as e:
		return e.code

	conf = Config(config_file=args.config)
	try:
		# defaults until the config file is read
		init_logging(conf)
		conf.load()
		if args.loglevel:
			conf.loglevel = Config.loglevel_string_to_level(args.loglevel)
		init_logging(conf)
		conf.debug()

		cfg = experiment_config(args, conf)
		writer = run(cfg)
		writer.write(cfg.output)

	except QDiscordError as e:
		LOG.error("{}: {}".format(type(e).__name__, e))
		return e.exit_code

	except OSError as e:
		LOG.error("Failed to write output: {}".format(e))
		return 2

	return 0


if __name__ == '__main__':
	sys.exit(main())
