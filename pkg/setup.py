from setuptools import setup

setup(
	name='libqdiscord',
	version='0.1.0',
	description='local detection of quantum discord through '\
		'reduced dynamics',
	author='Lukas Wiese',
	author_email='luken@gmx.net',
	licence='GPLv3+',
	packages=['libqdiscord'],
	python_requires='>=3.9',
	install_requires=[
		'numpy',
		'scipy',
		'cryptography'
	],
	extras_require={
		'test': ['pytest']
	},
	entry_points={
		'console_scripts': [
			'qdiscord=libqdiscord.cli:main'
		]
	},
	classifiers=[
		"Development Status :: 3 - Alpha",
		"Environment :: Console",

		"Intended Audience :: Science/Research",
		"Intended Audience :: Education",

		"License :: OSI Approved :: GNU General Public License v3 or later (GPLv3+)",
		'Operating System :: POSIX',
		'Programming Language :: Python :: 3.11',
		'Topic :: Scientific/Engineering :: Physics',
	]
)
