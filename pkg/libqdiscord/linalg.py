"""\
Dense linear algebra on bipartite systems.

Tensor products, partial traces, norms, the Hermitian eigen
solver and spectral propagators. Functions taking a "complex
matrix" accept raw numpy arrays, functions taking a state or
operator expect the types from operators.py.

The raw helpers trace_out_b(), trace_out_a() and
hs_norm_sq() also work on stacks of matrices with shape
(..., d, d), which is what the Monte Carlo and trajectory
code feeds them.
"""

import logging

import numpy as np
from scipy.linalg import eigh, svdvals

from libqdiscord.tolerance import Tol
from libqdiscord.errors import InvalidOperator, DimensionMismatch
from libqdiscord.operators import BipartiteDims, DensityMatrix
from libqdiscord.operators import HermitianOperator, UnitaryOperator
from libqdiscord.operators import SpectralDecomposition

LOG = logging.getLogger(__name__)


def tensor_product(a, b):
	"""\
	Kronecker product a (x) b in A-major ordering:
	  (a(x)b)[i*dB+k, j*dB+l] = a[i,j] * b[k,l]
	Raises:
	  InvalidOperator: If a or b is not square
	"""
	a = np.asarray(a)
	b = np.asarray(b)
	for m in (a, b):
		if m.ndim != 2 or m.shape[0] != m.shape[1]:
			raise InvalidOperator("tensor_product: operands must "\
				"be square, got shape {}".format(m.shape))
	return np.kron(a, b)


def trace_out_b(m, dims:BipartiteDims):
	"""\
	Partial trace over B of a raw (stack of) d x d matrix.
	Return:
	  Array of shape (..., dA, dA)
	"""
	m = np.asarray(m)
	shape = m.shape[:-2] + (dims.dA, dims.dB, dims.dA, dims.dB)
	return np.einsum('...ikjk->...ij', m.reshape(shape))


def trace_out_a(m, dims:BipartiteDims):
	"""\
	Partial trace over A of a raw (stack of) d x d matrix.
	Return:
	  Array of shape (..., dB, dB)
	"""
	m = np.asarray(m)
	shape = m.shape[:-2] + (dims.dA, dims.dB, dims.dA, dims.dB)
	return np.einsum('...kikj->...ij', m.reshape(shape))


def partial_trace_B(rho:DensityMatrix):
	"""\
	Reduced state rho_A = Tr_B rho, tagged with dims (dA,1).
	"""
	dims = rho.dims
	return DensityMatrix(trace_out_b(rho.matrix, dims),
			BipartiteDims(dims.dA, 1))


def partial_trace_A(rho:DensityMatrix):
	"""\
	Reduced state rho_B = Tr_A rho, tagged with dims (1,dB).
	"""
	dims = rho.dims
	return DensityMatrix(trace_out_a(rho.matrix, dims),
			BipartiteDims(1, dims.dB))


def hs_norm_sq(m):
	"""\
	Squared Hilbert-Schmidt norm Tr(M^dagger M), i.e. the sum
	of the squared moduli of all entries. Reduces over the
	last two axes, so a stack of matrices gives an array.
	"""
	m = np.asarray(m)
	res = np.sum(m.real**2 + m.imag**2, axis=(-2, -1))
	return float(res) if np.ndim(res) == 0 else res


def purity(rho:DensityMatrix):
	"""\
	Purity Tr(rho^2), in [1/d, 1].
	"""
	# rho is Hermitian, so Tr(rho^2) = Tr(rho^dagger rho)
	return hs_norm_sq(rho.matrix)


def trace_norm(m):
	"""\
	Trace norm Tr sqrt(M^dagger M) = sum of singular values.
	"""
	m = np.asarray(m, dtype=np.complex128)
	if m.size == 0:
		return 0.0
	return float(np.sum(svdvals(m)))


def _raw_matrix(h):
	return np.asarray(h.matrix if hasattr(h, 'matrix') else h,
			dtype=np.complex128)


def eig_hermitian(h):
	"""\
	Deterministic eigen decomposition of a Hermitian operator.

	Eigenvalues come out ascending. Within clusters of
	eigenvalues closer than Tol.degeneracy_threshold() the
	eigenvectors are ordered by the index of their
	largest-modulus component. Each eigenvector's phase is
	fixed so that this component is real and positive.

	Args:
	  h: HermitianOperator, DensityMatrix or raw matrix
	Return:
	  SpectralDecomposition
	Raises:
	  InvalidOperator: If h is not Hermitian
	"""
	m = _raw_matrix(h)
	if m.ndim != 2 or m.shape[0] != m.shape[1]:
		raise InvalidOperator("eig_hermitian: matrix must be square")
	dev = float(np.max(np.abs(m - m.conj().T)))
	if dev >= Tol.HERM:
		raise InvalidOperator("eig_hermitian: not Hermitian "\
			"(deviation {:.3e})".format(dev))

	lam, vec = eigh(0.5 * (m + m.conj().T))

	# Largest-modulus component of each column, phase fix
	pivots = np.argmax(np.abs(vec), axis=0)
	phases = vec[pivots, np.arange(vec.shape[1])]
	vec = vec * (np.abs(phases) / phases)

	# Tie-break inside degenerate clusters
	threshold = Tol.degeneracy_threshold(lam)
	order = np.arange(len(lam))
	start = 0
	for i in range(1, len(lam) + 1):
		if i == len(lam) or lam[i] - lam[i-1] >= threshold:
			if i - start > 1:
				cluster = order[start:i]
				order[start:i] = cluster[np.argsort(
					pivots[cluster], kind='stable')]
			start = i

	return SpectralDecomposition(lam[order], vec[:, order])


def propagator_matrices(spectral:SpectralDecomposition, times):
	"""\
	Stack of propagators exp(-iHt) for all given times from a
	single eigen decomposition.
	Return:
	  Array of shape (len(times), d, d)
	"""
	v = spectral.eigenvectors
	t = np.asarray(times, dtype=np.float64).reshape(-1, 1)
	phases = np.exp(-1j * t * spectral.eigenvalues[np.newaxis, :])
	return np.einsum('ik,tk,jk->tij', v, phases, v.conj())


def propagator(h:HermitianOperator, t, spectral=None):
	"""\
	Time evolution operator U_t = exp(-iHt), evaluated as
	V diag(exp(-i lambda t)) V^dagger.

	Args:
	  h:        Hamiltonian
	  t:        Time (finite real)
	  spectral: Optional precomputed eig_hermitian(h)
	Return:
	  UnitaryOperator
	Raises:
	  InvalidOperator: If t is not finite
	"""
	if not np.isfinite(t):
		raise InvalidOperator("propagator: time must be finite, "\
			"got {}".format(t))
	if spectral is None:
		spectral = eig_hermitian(h)
	u = spectral.apply(lambda lam: np.exp(-1j * lam * t))
	return UnitaryOperator(u, h.dims)


def evolve(rho:DensityMatrix, u:UnitaryOperator):
	"""\
	Unitary evolution rho -> U rho U^dagger.
	Raises:
	  DimensionMismatch
	"""
	if rho.dims != u.dims:
		raise DimensionMismatch("evolve: state dims {} vs "\
			"unitary dims {}".format(rho.dims, u.dims))
	um = u.matrix
	return DensityMatrix(um @ rho.matrix @ um.conj().T, rho.dims)


def commutator_norm(a, b):
	"""\
	Max-entry norm of the commutator [a, b].
	"""
	a = _raw_matrix(a)
	b = _raw_matrix(b)
	return float(np.max(np.abs(a @ b - b @ a)))


def uncoupled_hamiltonian(h_a, h_b):
	"""\
	Non-interacting Hamiltonian H_A (x) I + I (x) H_B.
	Its propagator factorizes into U_A (x) U_B, so the witness
	stays zero for all times.
	Args:
	  h_a, h_b: Local Hermitian matrices (raw or operator)
	Return:
	  HermitianOperator with dims (dA, dB)
	"""
	a = _raw_matrix(h_a)
	b = _raw_matrix(h_b)
	dims = BipartiteDims(a.shape[0], b.shape[0])
	m = tensor_product(a, np.eye(dims.dB)) \
		+ tensor_product(np.eye(dims.dA), b)
	return HermitianOperator(m, dims)
