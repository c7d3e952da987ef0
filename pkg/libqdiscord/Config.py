import configparser
from os.path import join   as path_join
from os.path import exists as path_exists
from os.path import expanduser
import logging

from libqdiscord.errors import ConfigError
from libqdiscord.tolerance import Tol

"""\
qdiscord configs

The config file lives at ~/.qdiscord/config.txt (or wherever
--config points to) and may look like this:

	[default]
	loglevel  = info
	logfile   = /tmp/qdiscord.log
	logformat = %%(levelname)s  %%(message)s

	[experiment]
	seed                  = 1
	t_end                 = 50.0
	n_points              = 500
	n_samples             = 2000
	n_hamiltonians        = 10
	workers               = 1
	convergence_threshold = 0.02

Every option is optional, a missing file means defaults only.
Command line flags override values from the file.
"""

LOG = logging.getLogger(__name__)


class Config:
	def __init__(self, basedir=None, config_file=None):

		if not basedir:
			basedir = path_join(expanduser('~'), '.qdiscord')

		self.basedir     = basedir
		self.config_file = config_file or path_join(self.basedir,
					"config.txt")

		# [default]
		self.loglevel  = logging.WARNING
		self.logformat = "%(asctime)s  %(levelname)s  "\
				 "%(name)s  %(message)s"
		self.logfile   = None

		# [experiment]
		self.seed           = 1
		self.t_end          = 50.0
		self.n_points       = 500
		self.n_samples      = 2000
		self.n_hamiltonians = 10
		self.workers        = 1
		self.convergence_threshold = Tol.CONVERGENCE


	def load(self):
		"""\
		Read the config file, if there is one.

		Return:
		  True if a file was read, False if only defaults are used
		Raises:
		  ConfigError: If the file holds an invalid value
		"""
		if not path_exists(self.config_file):
			LOG.debug("No config file at " + self.config_file)
			return False

		try:
			LOG.debug("Loading configs from " + self.config_file)
			conf = configparser.ConfigParser()
			conf.read(self.config_file)

			# [default]
			if conf.has_option('default', 'loglevel'):
				self.loglevel = self.loglevel_string_to_level(
						conf.get('default', 'loglevel'))
			self.logfile = conf.get('default', 'logfile',
					fallback=self.logfile) or None
			self.logformat = conf.get('default', 'logformat',
					fallback=self.logformat)

			# [experiment]
			self.seed = conf.getint('experiment', 'seed',
					fallback=self.seed)
			self.t_end = conf.getfloat('experiment', 't_end',
					fallback=self.t_end)
			self.n_points = conf.getint('experiment', 'n_points',
					fallback=self.n_points)
			self.n_samples = conf.getint('experiment', 'n_samples',
					fallback=self.n_samples)
			self.n_hamiltonians = conf.getint('experiment',
					'n_hamiltonians',
					fallback=self.n_hamiltonians)
			self.workers = conf.getint('experiment', 'workers',
					fallback=self.workers)
			self.convergence_threshold = conf.getfloat('experiment',
					'convergence_threshold',
					fallback=self.convergence_threshold)
		except (configparser.Error, ValueError) as e:
			raise ConfigError("Config.load: " + str(e))

		self.validate()
		return True


	def validate(self):
		"""\
		Raises:
		  ConfigError: If a value is out of range
		"""
		if not (0 <= self.seed < 2**64):
			raise ConfigError("seed must lie in [0, 2^64)")
		if not self.t_end > 0:
			raise ConfigError("t_end must be > 0")
		if self.n_points < 2:
			raise ConfigError("n_points must be >= 2")
		if self.n_samples < 2:
			raise ConfigError("n_samples must be >= 2")
		if self.n_hamiltonians < 1:
			raise ConfigError("n_hamiltonians must be >= 1")
		if self.workers < 1:
			raise ConfigError("workers must be >= 1")
		if not self.convergence_threshold > 0:
			raise ConfigError("convergence_threshold must be > 0")


	def debug(self):
		LOG.debug("SETTINGS:")
		LOG.debug("[default]")
		LOG.debug("  loglevel       = {}".format(self.loglevel))
		LOG.debug("  logfile        = {}".format(self.logfile))
		LOG.debug("  logformat      = '{}'".format(self.logformat))
		LOG.debug("[experiment]")
		LOG.debug("  seed           = {}".format(self.seed))
		LOG.debug("  t_end          = {}".format(self.t_end))
		LOG.debug("  n_points       = {}".format(self.n_points))
		LOG.debug("  n_samples      = {}".format(self.n_samples))
		LOG.debug("  n_hamiltonians = {}".format(self.n_hamiltonians))
		LOG.debug("  workers        = {}".format(self.workers))
		LOG.debug("  convergence    = {}".format(
				self.convergence_threshold))


	@staticmethod
	def loglevel_string_to_level(loglevel_str):
		"""\
		Return loglevel from string.
		Supported strings: 'ERROR', 'WARNING', 'INFO',
				   'DEBUG'
		Return:
			Loglevel
		Raise:
			ConfigError: If unsupported level string
		"""
		levels = {
			'error'   : logging.ERROR,
			'warning' : logging.WARNING,
			'info'    : logging.INFO,
			'debug'   : logging.DEBUG
		}
		levstr = loglevel_str.lower()
		if levstr not in levels:
			raise ConfigError("Invalid loglevel string '{}'"\
				.format(loglevel_str))
		else:
			return levels[levstr]
