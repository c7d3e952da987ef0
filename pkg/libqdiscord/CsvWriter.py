import csv
import io
import logging
import sys

import numpy as np

from libqdiscord.tolerance import QDISCORD_TOOL, QDISCORD_VERSION

"""\
CSV output of the experiments (see Output.md).

 # tool = qdiscord
 # version = 0.1.0
 # <key> = <value>		(metadata, keys in insertion order)
 t,dist				(column header)
 0.0,0.0			(rows)
 ...

A file may hold several blocks, each starting with its own
'# block = <name>' line followed by a header row. Floats are
written with 17 significant digits so they read back to the
same double. Nothing time or host dependent is written, equal
inputs give byte-identical files.
"""

LOG = logging.getLogger(__name__)


def format_value(value):
	"""\
	String form of one CSV cell / metadata value.
	"""
	if isinstance(value, (bool, np.bool_)):
		return "true" if value else "false"
	if isinstance(value, (int, np.integer)):
		return str(int(value))
	if isinstance(value, (float, np.floating)):
		v = float(value)
		if np.isnan(v):
			return "nan"
		if np.isinf(v):
			return "inf" if v > 0 else "-inf"
		return "{:.17g}".format(v)
	if value is None:
		return ""
	return str(value)


class CsvWriter:

	def __init__(self, command):
		"""\
		Args:
		  command: Name of the subcommand producing the file
		"""
		self.buf = io.StringIO()
		self.csv = csv.writer(self.buf, delimiter=',',
				lineterminator='\n')
		self.meta('tool', QDISCORD_TOOL)
		self.meta('version', QDISCORD_VERSION)
		self.meta('command', command)


	def meta(self, key, value):
		"""\
		Add a '# key = value' metadata line.
		"""
		self.buf.write("# {} = {}\n".format(key, format_value(value)))


	def meta_dict(self, values, prefix=''):
		for key in sorted(values):
			self.meta(prefix + key, values[key])


	def block(self, name):
		self.meta('block', name)


	def header(self, *columns):
		self.csv.writerow(columns)


	def row(self, *values):
		self.csv.writerow([format_value(v) for v in values])


	def getvalue(self):
		return self.buf.getvalue()


	def write(self, path):
		"""\
		Write the file. path '-' writes to stdout.
		"""
		data = self.getvalue()
		if path == '-':
			sys.stdout.write(data)
			sys.stdout.flush()
			return
		with open(path, 'w', newline='', encoding='utf-8') as f:
			f.write(data)
		LOG.info("wrote {} ({} bytes)".format(path, len(data)))
