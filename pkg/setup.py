#! /usr/bin/env python
"""Correspondence calculus for inductive mu-inequalities."""

import os

from setuptools import find_packages, setup

# get __version__ from _version.py
ver_file = os.path.join('mustaralba', '_version.py')
with open(ver_file) as f:
    exec(f.read())

DISTNAME = 'mustar-alba'
DESCRIPTION = 'Classification and correspondence calculus for inductive mu-inequalities.'
with open("README.md", "r") as fh:
    long_description = fh.read()

LICENSE = 'new BSD'
VERSION = __version__
INSTALL_REQUIRES = ['numpy', 'pandas', 'lark', 'networkx']
CLASSIFIERS = ['Intended Audience :: Science/Research',
               'Intended Audience :: Developers',
               'License :: OSI Approved',
               'Programming Language :: Python',
               'Topic :: Scientific/Engineering :: Mathematics',
               'Operating System :: Microsoft :: Windows',
               'Operating System :: POSIX',
               'Operating System :: Unix',
               'Operating System :: MacOS',
               'Programming Language :: Python :: 3.8',
               'Programming Language :: Python :: 3.9',
               'Programming Language :: Python :: 3.10']
EXTRAS_REQUIRE = {
    'tests': [
        'pytest',
        'pytest-cov',
        'hypothesis'],
    'docs': [
        'sphinx',
        'sphinx-gallery',
        'sphinx_rtd_theme',
        'numpydoc',
        'matplotlib'
    ]
}

package_data= {
          "mustaralba": ["algebras/*.json"],
      }

setup(name=DISTNAME,
      description=DESCRIPTION,
      license=LICENSE,
      version=VERSION,
      long_description=long_description,
      long_description_content_type='text/markdown',
      zip_safe=False,  # the bundled algebras are read from the package directory
      classifiers=CLASSIFIERS,
      packages=find_packages(exclude=['gallery']),
      install_requires=INSTALL_REQUIRES,
      extras_require=EXTRAS_REQUIRE,
      package_data=package_data,
      entry_points={
          'console_scripts': ['mustar-alba = mustaralba.cli:main'],
      },
      python_requires='>=3.8',
      keywords='modal mu-calculus correspondence ALBA lattice',
      )
