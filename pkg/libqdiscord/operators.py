"""\
Operator types of a bipartite system H = H_A (x) H_B.

All matrices use the A-major composite index: the basis state
|i>|k> of A (x) B sits at row i*dB + k. This is exactly the
ordering of numpy.kron, so a (x) b == np.kron(a, b).

Every type validates its invariants on construction and
stores a read-only copy of the matrix, so instances can be
shared freely between threads.

  BipartiteDims          dA, dB, d = dA*dB
  DensityMatrix          Hermitian, unit trace, positive
  HermitianOperator      Hermitian (Hamiltonians)
  UnitaryOperator        U^dagger U = I (propagators)
  SpectralDecomposition  eigenvalues (ascending) + eigenvectors
"""

from dataclasses import dataclass
import logging

import numpy as np
from scipy.linalg import eigvalsh

from libqdiscord.tolerance import Tol
from libqdiscord.errors import InvalidOperator, DimensionMismatch

LOG = logging.getLogger(__name__)


@dataclass(frozen=True)
class BipartiteDims:
	"""\
	Dimensions of subsystem A and B.

	A local system needs dA >= 2 to carry any discord, this is
	checked where it matters (dephasing). Reduced states are
	tagged with (dA,1) or (1,dB).
	"""
	dA: int
	dB: int

	def __post_init__(self):
		for name in ('dA', 'dB'):
			value = getattr(self, name)
			if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
				raise InvalidOperator("{} must be an integer, got {!r}"\
					.format(name, value))
			if value < 1:
				raise InvalidOperator("{} must be positive, got {}"\
					.format(name, value))
		object.__setattr__(self, 'dA', int(self.dA))
		object.__setattr__(self, 'dB', int(self.dB))

	@property
	def d(self):
		return self.dA * self.dB

	def __str__(self):
		return "{}x{}".format(self.dA, self.dB)


def _as_square(matrix, dims, what):
	m = np.array(matrix, dtype=np.complex128)
	if m.ndim != 2 or m.shape[0] != m.shape[1]:
		raise InvalidOperator("{}: matrix must be square, got shape {}"\
			.format(what, m.shape))
	if m.shape[0] != dims.d:
		raise InvalidOperator("{}: matrix size {} does not match dims {} (d={})"\
			.format(what, m.shape[0], dims, dims.d))
	return m


def _hermitize(m, what):
	"""\
	Check Hermiticity and symmetrize away the residual.
	Raises:
	  InvalidOperator: If max |M - M^dagger| >= Tol.HERM
	"""
	dev = float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0
	if dev >= Tol.HERM:
		raise InvalidOperator("{}: not Hermitian (deviation {:.3e})"\
			.format(what, dev))
	return 0.5 * (m + m.conj().T)


def _freeze(m):
	m.setflags(write=False)
	return m


def check_same_dims(*operators):
	"""\
	Make sure all given operators are tagged with the same
	bipartite dimensions.
	Return:
	  The shared BipartiteDims
	Raises:
	  DimensionMismatch
	"""
	dims = operators[0].dims
	for op in operators[1:]:
		if op.dims != dims:
			raise DimensionMismatch("Dimension mismatch: {} vs {}"\
				.format(dims, op.dims))
	return dims


class DensityMatrix:
	"""\
	Density matrix of the composite (or a reduced) system.
	"""

	def __init__(self, matrix, dims:BipartiteDims):
		m = _hermitize(_as_square(matrix, dims, "DensityMatrix"),
				"DensityMatrix")

		tr = np.trace(m).real
		if abs(tr - 1.0) >= Tol.TRACE:
			raise InvalidOperator("DensityMatrix: trace is {!r}, "\
				"expected 1".format(tr))

		lmin = float(eigvalsh(m)[0])
		if lmin < -Tol.PSD:
			raise InvalidOperator("DensityMatrix: not positive "\
				"semidefinite (min eigenvalue {:.3e})".format(lmin))

		self._matrix = _freeze(m)
		self._dims   = dims


	@property
	def matrix(self):
		return self._matrix

	@property
	def dims(self):
		return self._dims

	@property
	def d(self):
		return self._dims.d


	@classmethod
	def from_ket(cls, psi, dims:BipartiteDims):
		"""\
		Create |psi><psi| from a state vector.
		The vector is normalized first.
		Raises:
		  InvalidOperator: If psi is zero or has wrong length
		"""
		v = np.asarray(psi, dtype=np.complex128).reshape(-1)
		if v.shape[0] != dims.d:
			raise InvalidOperator("Ket of length {} does not match "\
				"dims {}".format(v.shape[0], dims))
		norm = np.linalg.norm(v)
		if norm == 0:
			raise InvalidOperator("Zero vector is not a state")
		v = v / norm
		return cls(np.outer(v, v.conj()), dims)


	@classmethod
	def maximally_mixed(cls, dims:BipartiteDims):
		return cls(np.eye(dims.d, dtype=np.complex128) / dims.d, dims)


	@classmethod
	def product(cls, rho_a, rho_b):
		"""\
		Product state rho_A (x) rho_B of two local states.
		"""
		dims = BipartiteDims(rho_a.d, rho_b.d)
		return cls(np.kron(rho_a.matrix, rho_b.matrix), dims)


	@classmethod
	def local(cls, matrix):
		"""\
		A single-system state, tagged with dims (d,1).
		"""
		m = np.asarray(matrix, dtype=np.complex128)
		return cls(m, BipartiteDims(m.shape[0], 1))


	def __repr__(self):
		return "DensityMatrix(dims={})".format(self._dims)


class HermitianOperator:
	"""\
	Hermitian operator, e.g. a Hamiltonian H.
	"""

	def __init__(self, matrix, dims:BipartiteDims):
		m = _hermitize(_as_square(matrix, dims, "HermitianOperator"),
				"HermitianOperator")
		self._matrix = _freeze(m)
		self._dims   = dims

	@property
	def matrix(self):
		return self._matrix

	@property
	def dims(self):
		return self._dims

	@property
	def d(self):
		return self._dims.d

	def __repr__(self):
		return "HermitianOperator(dims={})".format(self._dims)


class UnitaryOperator:
	"""\
	Unitary operator, e.g. the propagator U_t = exp(-iHt).
	"""

	def __init__(self, matrix, dims:BipartiteDims):
		m = _as_square(matrix, dims, "UnitaryOperator")
		dev = float(np.max(np.abs(m.conj().T @ m - np.eye(dims.d))))
		if dev >= Tol.UNIT:
			raise InvalidOperator("UnitaryOperator: U^dagger U "\
				"deviates from identity by {:.3e}".format(dev))
		self._matrix = _freeze(m)
		self._dims   = dims

	@property
	def matrix(self):
		return self._matrix

	@property
	def dims(self):
		return self._dims

	@property
	def d(self):
		return self._dims.d

	@classmethod
	def identity(cls, dims:BipartiteDims):
		return cls(np.eye(dims.d, dtype=np.complex128), dims)

	@classmethod
	def local_product(cls, u_a, u_b):
		"""\
		Factorized evolution U_A (x) U_B from two raw local
		unitaries.
		"""
		u_a = np.asarray(u_a, dtype=np.complex128)
		u_b = np.asarray(u_b, dtype=np.complex128)
		dims = BipartiteDims(u_a.shape[0], u_b.shape[0])
		return cls(np.kron(u_a, u_b), dims)

	def __repr__(self):
		return "UnitaryOperator(dims={})".format(self._dims)


class SpectralDecomposition:
	"""\
	Eigen decomposition H = V diag(eigenvalues) V^dagger.

	eigenvalues are ascending, the columns of eigenvectors are
	orthonormal. Built by linalg.eig_hermitian().
	"""

	def __init__(self, eigenvalues, eigenvectors):
		self.eigenvalues  = _freeze(np.array(eigenvalues, dtype=np.float64))
		self.eigenvectors = _freeze(np.array(eigenvectors, dtype=np.complex128))


	def apply(self, func):
		"""\
		Functional calculus: V diag(func(eigenvalues)) V^dagger.
		Args:
		  func: Elementwise function on the eigenvalue vector
		Return:
		  complex ndarray
		"""
		v = self.eigenvectors
		return (v * func(self.eigenvalues)) @ v.conj().T


	def reconstruct(self):
		return self.apply(lambda lam: lam)


def pure_state_z(z):
	"""\
	Two-qubit pure state |Psi_z> = sqrt(z)|00> + sqrt(1-z)|11>.
	Args:
	  z: Weight of |00>, 0 <= z <= 1
	Return:
	  DensityMatrix with dims 2x2
	Raises:
	  InvalidOperator: If z is out of range
	"""
	if not (0.0 <= z <= 1.0):
		raise InvalidOperator("z must lie in [0,1], got {}".format(z))
	psi = np.zeros(4, dtype=np.complex128)
	psi[0] = np.sqrt(z)
	psi[3] = np.sqrt(1.0 - z)
	return DensityMatrix.from_ket(psi, BipartiteDims(2, 2))
