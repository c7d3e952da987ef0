"""\
Random ensembles: Haar unitaries, GUE Hamiltonians and their
Gibbs states, random density matrices and Kraus maps.

Every sampler takes its randomness explicitly, either as an
RngSeed or as a numpy Generator. Nothing touches global numpy
random state.

Conventions
  - Complex Gaussian entries are standard complex normal: real
    and imaginary part each have variance 1/2.
  - GUE: H = (G + G^dagger)/2 with G complex Gaussian.
  - Boltzmann constant k = 1, beta is the only temperature knob.
"""

from dataclasses import dataclass
import logging

import numpy as np

from libqdiscord.errors import InvalidOperator
from libqdiscord.operators import BipartiteDims, DensityMatrix
from libqdiscord.operators import HermitianOperator, UnitaryOperator
from libqdiscord.linalg import eig_hermitian
from libqdiscord.dynamics import KrausMap
from libqdiscord.RngSeed import RngSeed

LOG = logging.getLogger(__name__)


def as_generator(rng):
	"""\
	numpy Generator from an RngSeed or Generator.
	"""
	if isinstance(rng, RngSeed):
		return rng.generator()
	if isinstance(rng, np.random.Generator):
		return rng
	raise TypeError("Expected RngSeed or numpy Generator, got {}"\
		.format(type(rng).__name__))


def _as_dims(d):
	if isinstance(d, BipartiteDims):
		return d
	return BipartiteDims(int(d), 1)


def standard_normal_complex(gen, shape):
	"""\
	Complex Gaussian array, E|z|^2 = 1.
	"""
	return (gen.standard_normal(shape)
		+ 1j * gen.standard_normal(shape)) / np.sqrt(2.0)


def sample_haar_unitaries(d:int, n:int, rng):
	"""\
	n Haar distributed d x d unitaries.

	QR decomposition of complex Gaussian matrices Z = QR. Plain
	Q is not Haar distributed, the columns of Q are multiplied
	with the phases of the diagonal of R, which makes the
	decomposition unique (R with positive diagonal).

	Return:
	  complex array of shape (n, d, d)
	"""
	if d < 1 or n < 0:
		raise InvalidOperator("Need d >= 1 and n >= 0, got d={} n={}"\
			.format(d, n))
	gen = as_generator(rng)
	z = standard_normal_complex(gen, (n, d, d))
	q, r = np.linalg.qr(z)
	diag = np.diagonal(r, axis1=-2, axis2=-1)
	return q * (diag / np.abs(diag))[:, np.newaxis, :]


def sample_haar_unitary(d, rng):
	"""\
	One Haar random unitary.
	Args:
	  d:   Dimension (int) or BipartiteDims
	  rng: RngSeed or numpy Generator
	Return:
	  UnitaryOperator (dims (d,1) if d is an int)
	"""
	dims = _as_dims(d)
	return UnitaryOperator(sample_haar_unitaries(dims.d, 1, rng)[0], dims)


def sample_gue_hamiltonian(d, rng):
	"""\
	GUE Hamiltonian H = (G + G^dagger)/2.
	Args:
	  d:   Dimension (int) or BipartiteDims
	  rng: RngSeed or numpy Generator
	Return:
	  HermitianOperator
	"""
	dims = _as_dims(d)
	gen = as_generator(rng)
	g = standard_normal_complex(gen, (dims.d, dims.d))
	return HermitianOperator(0.5 * (g + g.conj().T), dims)


@dataclass(frozen=True)
class GibbsParams:
	beta: float
	dims: BipartiteDims

	def __post_init__(self):
		if not np.isfinite(self.beta) or self.beta < 0:
			raise InvalidOperator("beta must be finite and >= 0, "\
				"got {}".format(self.beta))


def gibbs_state(h:HermitianOperator, params:GibbsParams, spectral=None):
	"""\
	Thermal state rho_G = exp(-beta H)/Z, Z = Tr exp(-beta H).

	The spectrum is shifted by its minimum before exponentiating,
	which leaves rho_G unchanged and keeps exp() from overflowing.

	Args:
	  h:        Hamiltonian
	  params:   GibbsParams (dims must match h)
	  spectral: Optional precomputed eig_hermitian(h)
	Return:
	  DensityMatrix
	"""
	if params.dims != h.dims:
		raise InvalidOperator("GibbsParams dims {} do not match "\
			"Hamiltonian dims {}".format(params.dims, h.dims))
	if spectral is None:
		spectral = eig_hermitian(h)
	lam = spectral.eigenvalues
	weights = np.exp(-params.beta * (lam - lam[0]))
	populations = weights / np.sum(weights)
	return DensityMatrix(spectral.apply(lambda _: populations), h.dims)


def sample_density_matrix(dims:BipartiteDims, rng, rank=None):
	"""\
	Random state rho = G G^dagger / Tr(G G^dagger) with G a
	d x rank complex Gaussian matrix (Hilbert-Schmidt measure
	for rank = d).
	"""
	gen = as_generator(rng)
	rank = dims.d if rank is None else int(rank)
	if not (1 <= rank <= dims.d):
		raise InvalidOperator("rank must lie in [1, {}], got {}"\
			.format(dims.d, rank))
	g = standard_normal_complex(gen, (dims.d, rank))
	m = g @ g.conj().T
	return DensityMatrix(m / np.trace(m).real, dims)


def sample_kraus_map(dims:BipartiteDims, n_ops:int, rng):
	"""\
	Random trace preserving map with n_ops Kraus operators,
	cut from the first d columns of a Haar unitary V on
	C^(d*n_ops): K_a = V[a*d:(a+1)*d, :d].
	"""
	d = dims.d
	v = sample_haar_unitaries(d * n_ops, 1, rng)[0]
	ops = [v[a * d:(a + 1) * d, :d] for a in range(n_ops)]
	return KrausMap(ops, dims)
