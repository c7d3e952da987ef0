import numpy as np
from pytest import fixture

from libqdiscord.operators import BipartiteDims
from libqdiscord.ensembles import sample_density_matrix
from libqdiscord.ensembles import sample_gue_hamiltonian
from libqdiscord.ensembles import sample_haar_unitaries
from libqdiscord.RngSeed import RngSeed


def pytest_configure(config):
	config.addinivalue_line('markers',
		"slow: long statistical suites (deselect with -m 'not slow')")


@fixture
def rng():
	return np.random.default_rng(20240611)


@fixture
def dims22():
	return BipartiteDims(2, 2)


@fixture
def random_state(rng):
	def make(da, db, rank=None):
		return sample_density_matrix(BipartiteDims(da, db), rng, rank)
	return make


@fixture
def random_hamiltonian(rng):
	def make(da, db):
		return sample_gue_hamiltonian(BipartiteDims(da, db), rng)
	return make


@fixture
def random_local_unitary(rng):
	"""\
	Raw Haar unitary on one subsystem.
	"""
	def make(d):
		return sample_haar_unitaries(d, 1, rng)[0]
	return make


@fixture
def seed():
	return RngSeed(7)
