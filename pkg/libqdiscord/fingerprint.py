"""\
Fingerprints of matrices.

Experiments that must run on one fixed Hamiltonian record a
SHA-256 digest of its matrix bytes, so two blocks of output can
be checked to come from bit-identical operators.
"""

import numpy as np

from cryptography.hazmat.primitives import hashes


def hash_sha256(data, return_hex=False):
	"""\
	Hash data with sha256
	Args:
	  data:  Data to hash
	  return_hex: Return hash as hex?
	Return:
	  Sha256 hash
	"""
	h = hashes.Hash(hashes.SHA256())
	h.update(data)
	dig = h.finalize()
	return dig.hex() if return_hex else dig


def matrix_fingerprint(m):
	"""\
	Hex SHA-256 of a matrix (operator or raw array).

	Shape and dtype are part of the digest, the data is
	hashed as little-endian complex128 in C order.
	"""
	m = np.ascontiguousarray(getattr(m, 'matrix', m),
			dtype='<c16')
	header = "{}x{}:complex128:".format(*m.shape).encode()
	return hash_sha256(header + m.tobytes(), return_hex=True)
