"""\
Local dephasing and the geometric discord measure.

A state rho of A (x) B has zero discord with respect to A if it
can be written as

	rho = sum_i p_i |i><i| (x) rho_B^i

for some orthonormal basis {|i>} of H_A. The local dephasing
map in the eigenbasis of rho_A,

	rho' = (Phi (x) I_B) rho = sum_i Pi_i rho Pi_i,
	Pi_i = |i><i| (x) I_B,

leaves such states invariant, keeps both marginals of any rho
and always produces a zero-discord state. The squared
Hilbert-Schmidt distance D(rho) = ||rho - rho'||^2 measures the
discord and equals the purity drop P(rho) - P(rho').

If rho_A is degenerate its eigenbasis is not unique and
dephasing in an arbitrary eigenbasis may change even a
zero-discord state. Such states are rejected unless the
caller passes allow_degenerate=True.
"""

from dataclasses import dataclass
import logging

import numpy as np

from libqdiscord.tolerance import Tol
from libqdiscord.errors import DegenerateLocalState, NotPure
from libqdiscord.errors import InvalidOperator, DimensionMismatch
from libqdiscord.operators import BipartiteDims, DensityMatrix
from libqdiscord.operators import check_same_dims
from libqdiscord.linalg import partial_trace_B, trace_out_b
from libqdiscord.linalg import eig_hermitian, hs_norm_sq, purity
from libqdiscord.linalg import trace_norm
from libqdiscord.dynamics import KrausMap, witness_distance

LOG = logging.getLogger(__name__)


class DephasingBasis:
	"""\
	Eigenbasis of the reduced state rho_A.

	  vectors          dA x dA matrix, columns are |i>
	  eigenvalues      p_i, in the order of the vectors
	  degenerate       Some eigenvalue gap below threshold
	  local_state_pure rho_A is pure (max p_i > 1 - Tol.PURE)
	"""

	def __init__(self, vectors, eigenvalues):
		self.vectors     = np.array(vectors, dtype=np.complex128)
		self.eigenvalues = np.array(eigenvalues, dtype=np.float64)
		self.vectors.setflags(write=False)
		self.eigenvalues.setflags(write=False)

		n = self.vectors.shape[1]
		dev = np.max(np.abs(self.vectors.conj().T @ self.vectors - np.eye(n)))
		if dev >= Tol.UNIT:
			raise InvalidOperator("DephasingBasis: vectors not "\
				"orthonormal (deviation {:.3e})".format(dev))

		p = np.sort(self.eigenvalues)
		threshold = Tol.degeneracy_threshold(p)
		self.local_state_pure = bool(p[-1] > 1.0 - Tol.PURE)
		# ties inside the null space of a pure rho_A leave
		# the dephased state unchanged
		self.degenerate = not self.local_state_pure and \
			bool(np.any(np.diff(p) < threshold))


	@property
	def dA(self):
		return self.vectors.shape[1]


	def projectors(self, dB):
		"""\
		Pi_i = |i><i| (x) I_B for all basis vectors.
		Return:
		  Array of shape (dA, dA*dB, dA*dB)
		"""
		eye = np.eye(dB, dtype=np.complex128)
		return np.array([np.kron(np.outer(v, v.conj()), eye)
				for v in self.vectors.T])


	def __repr__(self):
		return "DephasingBasis(p={}, degenerate={}, pure={})".format(
			np.round(self.eigenvalues, 12).tolist(),
			self.degenerate, self.local_state_pure)


def dephasing_basis(rho:DensityMatrix):
	"""\
	Eigenbasis of rho_A = Tr_B rho with degeneracy and purity
	flags. Ordering is deterministic (see eig_hermitian).
	Raises:
	  InvalidOperator: If dA < 2
	"""
	if rho.dims.dA < 2:
		raise InvalidOperator("Dephasing needs dA >= 2, got dims {}"\
			.format(rho.dims))
	spectral = eig_hermitian(partial_trace_B(rho))
	basis = DephasingBasis(spectral.eigenvectors, spectral.eigenvalues)
	LOG.debug("dephasing basis: {}".format(basis))
	return basis


def computational_basis(rho:DensityMatrix):
	"""\
	The computational basis of A as dephasing basis. Only valid
	if it is an eigenbasis of rho_A, i.e. rho_A is diagonal.
	Eigenvalues are listed in basis order, not sorted.
	Raises:
	  InvalidOperator: If rho_A is not diagonal
	"""
	rho_a = partial_trace_B(rho).matrix
	off = rho_a - np.diag(np.diag(rho_a))
	if rho_a.size and np.max(np.abs(off)) >= Tol.HERM:
		raise InvalidOperator("Computational basis is not an "\
			"eigenbasis of the local state")
	return DephasingBasis(np.eye(rho.dims.dA), np.diag(rho_a).real)


def _checked_basis(rho, basis, allow_degenerate):
	if basis is None:
		basis = dephasing_basis(rho)
	if basis.dA != rho.dims.dA:
		raise DimensionMismatch("Basis of dimension {} does not fit "\
			"dims {}".format(basis.dA, rho.dims))
	if basis.degenerate:
		if not allow_degenerate:
			raise DegenerateLocalState("Local state is degenerate "\
				"(p={}), dephasing basis is not unique".format(
				np.round(basis.eigenvalues, 12).tolist()))
		LOG.warning("Dephasing in tie-broken basis of a degenerate "\
			"local state")
	return basis


def local_dephase(rho:DensityMatrix, basis=None, allow_degenerate=False):
	"""\
	Apply the local dephasing map sum_i Pi_i rho Pi_i.

	Args:
	  rho:              State to dephase
	  basis:            DephasingBasis, computed from rho if None
	  allow_degenerate: Dephase even if rho_A is degenerate
	Return:
	  The reference state rho' (DensityMatrix)
	Raises:
	  DegenerateLocalState, DimensionMismatch
	"""
	basis = _checked_basis(rho, basis, allow_degenerate)
	dims = rho.dims

	# Rotate A into the dephasing basis, drop the blocks off the
	# A-diagonal and rotate back.
	w = np.kron(basis.vectors, np.eye(dims.dB))
	r = (w.conj().T @ rho.matrix @ w).reshape(dims.dA, dims.dB,
			dims.dA, dims.dB)
	mask = np.eye(dims.dA)[:, np.newaxis, :, np.newaxis]
	r = (r * mask).reshape(dims.d, dims.d)
	return DensityMatrix(w @ r @ w.conj().T, dims)


def geometric_discord(rho:DensityMatrix, basis=None, allow_degenerate=False):
	"""\
	D(rho) = ||rho - rho'||^2 (squared Hilbert-Schmidt norm).
	Args:
	  rho:              State
	  basis:            DephasingBasis, eigenbasis of rho_A if None
	  allow_degenerate: See local_dephase()
	Raises:
	  DegenerateLocalState
	"""
	rho_p = local_dephase(rho, basis, allow_degenerate)
	return hs_norm_sq(rho.matrix - rho_p.matrix)


def trace_norm_discord(rho:DensityMatrix, basis=None, allow_degenerate=False):
	"""\
	Trace norm counterpart ||rho - rho'||_1^2 of D(rho).
	"""
	rho_p = local_dephase(rho, basis, allow_degenerate)
	return trace_norm(rho.matrix - rho_p.matrix) ** 2


def purity_difference_check(rho:DensityMatrix, basis=None,
		allow_degenerate=False):
	"""\
	Both sides of ||rho - rho'||^2 = P(rho) - P(rho').
	Return:
	  lhs, rhs
	"""
	rho_p = local_dephase(rho, basis, allow_degenerate)
	lhs = hs_norm_sq(rho.matrix - rho_p.matrix)
	rhs = purity(rho) - purity(rho_p)
	return lhs, rhs


def generalized_concurrence(rho:DensityMatrix):
	"""\
	Generalized concurrence C = sqrt(2 (1 - Tr rho_A^2)) of a
	pure state. For pure states D(rho) = C^2/2.
	Raises:
	  NotPure: If Tr rho^2 <= 1 - Tol.PURE
	"""
	p = purity(rho)
	if p <= 1.0 - Tol.PURE:
		raise NotPure("Concurrence needs a pure state, purity "\
			"is {:.12f}".format(p))
	pa = purity(partial_trace_B(rho))
	return float(np.sqrt(max(0.0, 2.0 * (1.0 - pa))))


@dataclass(frozen=True)
class DiscordBounds:
	"""\
	Lower bounds on the discord obtained from the reduced
	dynamics.

	  trace_norm_bound  ||Tr_B{U Delta U^dagger}||_1^2, bounded
	                    by ||Delta||_1^2 (contractivity)
	  hs_bound          dist(t) / (dA dB), bounded by D(rho)
	"""
	trace_norm_bound: float
	hs_bound: float


def discord_lower_bounds(rho:DensityMatrix, rho_prime:DensityMatrix, u):
	"""\
	Lower bounds on the discord of rho for one propagator U.
	Args:
	  rho:       State
	  rho_prime: Its dephased reference state
	  u:         UnitaryOperator
	Return:
	  DiscordBounds
	"""
	dims = check_same_dims(rho, rho_prime, u)
	um = u.matrix
	reduced = trace_out_b(um @ (rho.matrix - rho_prime.matrix) @ um.conj().T,
			dims)
	return DiscordBounds(
		trace_norm_bound=trace_norm(reduced) ** 2,
		hs_bound=witness_distance(rho, rho_prime, u) / dims.d)


def make_zero_discord_state(probs, states):
	"""\
	Classical-quantum state sum_i p_i |i><i| (x) rho_B^i in the
	computational basis of A.

	Args:
	  probs:  Probability vector (length dA)
	  states: List of dA local states of B (DensityMatrix or
	          raw matrices)
	Return:
	  DensityMatrix with dims (dA, dB)
	Raises:
	  InvalidOperator: On a bad probability vector or states
	"""
	p = np.asarray(probs, dtype=np.float64).reshape(-1)
	if p.size == 0 or len(states) != p.size:
		raise InvalidOperator("Need one local state per probability "\
			"({} vs {})".format(p.size, len(states)))
	if np.any(p < 0) or abs(p.sum() - 1.0) >= Tol.TRACE:
		raise InvalidOperator("Not a probability vector: {}"\
			.format(p.tolist()))

	mats = []
	for s in states:
		if not isinstance(s, DensityMatrix):
			s = DensityMatrix.local(s)
		mats.append(s.matrix)
	dB = mats[0].shape[0]
	if any(m.shape[0] != dB for m in mats):
		raise InvalidOperator("Local states have different dimensions")

	dims = BipartiteDims(p.size, dB)
	rho = np.zeros((dims.d, dims.d), dtype=np.complex128)
	for i, (pi, m) in enumerate(zip(p, mats)):
		proj = np.zeros((dims.dA, dims.dA))
		proj[i, i] = 1.0
		rho += pi * np.kron(proj, m)
	return DensityMatrix(rho, dims)


def dephasing_map(basis:DephasingBasis, dims:BipartiteDims):
	"""\
	The local dephasing channel as a Kraus map {Pi_i}.
	"""
	if basis.dA != dims.dA:
		raise DimensionMismatch("Basis of dimension {} does not fit "\
			"dims {}".format(basis.dA, dims))
	return KrausMap(basis.projectors(dims.dB), dims)


def product_state_conclusion(basis:DephasingBasis):
	"""\
	If the local state is pure, the total state is a product
	state |phi><phi| (x) rho_B and no witness run is needed.
	Return:
	  Conclusion string or None
	"""
	if not basis.local_state_pure:
		return None
	return "local state is pure: total state is a product state, "\
		"no correlations between A and B"
