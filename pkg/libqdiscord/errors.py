"""\
Exceptions raised by libqdiscord.

Each error carries the process exit code the command line
tool terminates with when the error reaches it.

  0  success
  2  invalid config / invalid input
  3  degenerate local state without override
  4  time average did not converge
"""


class QDiscordError(Exception):
	exit_code = 1


class InvalidOperator(QDiscordError, ValueError):
	"""\
	An operator violates one of its defining invariants
	(Hermiticity, unit trace, positivity, unitarity, shape).
	"""
	exit_code = 2


class DimensionMismatch(QDiscordError, ValueError):
	exit_code = 2


class ConfigError(QDiscordError, ValueError):
	exit_code = 2


class NotPure(QDiscordError, ValueError):
	exit_code = 2


class DegenerateLocalState(QDiscordError):
	"""\
	The reduced state of subsystem A has a degenerate spectrum,
	so its eigenbasis (and therefore the dephasing map) is not
	unique. Pass allow_degenerate=True to dephase in the
	deterministic tie-broken basis anyway.
	"""
	exit_code = 3


class TimeAverageZero(QDiscordError):
	"""\
	The long-time average of the witness vanishes (factorized
	dynamics or zero discord), no effective dimension exists.
	"""
	exit_code = 4


class NotConverged(QDiscordError):
	exit_code = 4

	def __init__(self, message, relative_change=None):
		super().__init__(message)
		self.relative_change = relative_change
