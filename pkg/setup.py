"""Setup script."""

import time
from pathlib import Path

from setuptools import setup

with Path('README.md').open(encoding='utf-8') as f:
    long_description = f.read()

setup(name='equipass',
      # Use a datestamp as the version.
      version=time.strftime('%Y%m%d'),
      packages=['equipass'],
      description='Equivariant minimax for periodic Lagrangian systems',
      author='The equipass developers',
      license='GPLv3',
      long_description=long_description,
      long_description_content_type='text/markdown',
      keywords=['minimax', 'burnside ring', 'crystallographic groups',
                'periodic orbits'],
      classifiers=[
          'Development Status :: 4 - Beta',
          'Environment :: Console',
          'Intended Audience :: Science/Research',
          'License :: OSI Approved :: GNU General Public License v3 (GPLv3)',
          'Programming Language :: Python :: 3.10',
          'Programming Language :: Python :: 3.11',
          'Programming Language :: Python :: 3.12',
          'Topic :: Scientific/Engineering :: Mathematics',
      ],
      data_files=[('etc', ['equipass.cfg'])],
      scripts=['bin/equipass'],
      install_requires=[
          'colored<2',
          'numpy',
          'pandas',
          'pint',
          'requests',
          'sympy'])
