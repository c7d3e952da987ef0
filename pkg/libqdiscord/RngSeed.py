import numpy as np

"""\
Seeded random streams.

All sampling in libqdiscord draws from numpy's PCG64 bit
generator (a 64-bit permuted congruential generator). A seed
is a 64-bit unsigned integer, the same seed reproduces the
same sample stream bit for bit on the same build.

Parallel work never shares a stream. Each task derives its
own independent stream from (seed, task_index) through
numpy.random.SeedSequence spawn keys:

	rng = RngSeed(1234)
	gen = rng.generator()		# main stream
	gen_k = rng.derive(k).generator()	# stream of task k
"""

RNG_IDENTITY = "numpy.random.PCG64"

SEED_MAX = 2**64 - 1


class RngSeed:

	def __init__(self, seed:int, spawn_key=()):
		"""\
		Args:
		  seed:      64-bit unsigned integer
		  spawn_key: Task path of a derived stream
		Raises:
		  ValueError: If seed is out of range
		"""
		if isinstance(seed, bool) or int(seed) != seed \
				or not (0 <= seed <= SEED_MAX):
			raise ValueError("Seed must be an integer in [0, 2^64), "\
				"got {!r}".format(seed))
		self.seed      = int(seed)
		self.spawn_key = tuple(int(k) for k in spawn_key)


	def derive(self, task_index:int):
		"""\
		Independent stream for task task_index.
		"""
		return RngSeed(self.seed, self.spawn_key + (int(task_index),))


	def generator(self):
		"""\
		Fresh numpy Generator positioned at the start of this
		stream.
		"""
		ss = np.random.SeedSequence(self.seed, spawn_key=self.spawn_key)
		return np.random.Generator(np.random.PCG64(ss))


	def __eq__(self, other):
		return isinstance(other, RngSeed) and \
			(self.seed, self.spawn_key) == (other.seed, other.spawn_key)

	def __hash__(self):
		return hash((self.seed, self.spawn_key))

	def __repr__(self):
		if self.spawn_key:
			return "RngSeed({}, spawn_key={})".format(self.seed,
				self.spawn_key)
		return "RngSeed({})".format(self.seed)
