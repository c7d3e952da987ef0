"""\
Numerical tolerances and tool identity.

All modules compare against the same set of thresholds, so
they live in one place. Tolerances are absolute unless noted.

 HERM    Max-entry deviation of M - M^dagger
 TRACE   |Tr M - 1|
 PSD     Smallest admissible eigenvalue is -PSD
 UNIT    Max-entry deviation of U^dagger U - I
 RECON   Max-entry deviation of V diag(l) V^dagger - H
 DEG     Relative eigenvalue gap (times spectral range)
 PURE    1 - max eigenvalue below which a state counts as pure

"""

QDISCORD_VERSION = "0.1.0"
QDISCORD_TOOL    = "qdiscord"

# Composite index (i,k) of A (x) B maps to i*dB + k
INDEX_CONVENTION = "A-major"


class Tol:
	HERM  = 1e-10
	TRACE = 1e-10
	PSD   = 1e-9
	UNIT  = 1e-9
	RECON = 1e-9
	DEG   = 1e-10
	PURE  = 1e-10

	# Negative variance above -VAR_ROUND_OFF * ||Delta||^4 is round-off
	VAR_ROUND_OFF = 1e-15

	# Time average below this counts as zero signal
	ZERO_SIGNAL = 1e-12

	# Relative change of the time average when halving t_end
	CONVERGENCE = 0.02


	@staticmethod
	def degeneracy_threshold(eigenvalues):
		"""\
		Absolute gap below which two eigenvalues count
		as degenerate.
		Args:
		  eigenvalues: Sorted real eigenvalues
		Return:
		  DEG * max(spectral range, 1)
		"""
		if len(eigenvalues) < 2:
			return Tol.DEG
		span = float(eigenvalues[-1] - eigenvalues[0])
		# range of a density matrix is below 1, keep it absolute there
		return Tol.DEG * max(span, 1.0)
