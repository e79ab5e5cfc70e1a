#!/usr/bin/env python
# -*- coding: utf-8 -*-

from __future__ import absolute_import, with_statement
import os
import re
import sys
import codecs
from setuptools import setup, find_packages

# Change to source's directory prior to running any command
try:
    SETUP_DIRNAME = os.path.dirname(__file__)
except NameError:
    # We're most likely being frozen and __file__ triggered this NameError
    # Let's work around that
    SETUP_DIRNAME = os.path.dirname(sys.argv[0])

if SETUP_DIRNAME != '':
    os.chdir(SETUP_DIRNAME)


def read(fname):
    '''
    Read a file from the directory where setup.py resides
    '''
    file_path = os.path.join(SETUP_DIRNAME, fname)
    with codecs.open(file_path, encoding='utf-8') as rfh:
        return rfh.read()


def version():
    return re.search(r"__version__ = '([^']+)'", read(os.path.join('spikingrl', 'version.py'))).group(1)


setup(
    name='spiking-rl',
    version=version(),
    license='Apache Software License 2.0',
    description='Spiking actor and critic networks with learnable temporal coders',
    long_description=read('README.rst'),
    packages=find_packages(exclude=['tests']),
    python_requires='>=3.8',
    install_requires=[
        'numpy >= 1.17',
        'PyYAML',
        'msgpack >= 1.0',
        'tornado >= 5.0',
        'psutil >= 4.2.0',
        'matplotlib >= 3.1',
    ],
    extras_require={
        'proctitle': ['setproctitle'],
        'tests': [
            'pytest >= 7.0',
            'pytest-helpers-namespace',
        ],
    },
    classifiers=[
        'Development Status :: 4 - Beta',
        'Intended Audience :: Science/Research',
        'Topic :: Scientific/Engineering :: Artificial Intelligence',
        'Programming Language :: Python',
        'Programming Language :: Python :: 3',
        'Operating System :: OS Independent',
        'License :: OSI Approved :: Apache Software License',
    ],
    entry_points={
        'console_scripts': [
            'spiking-rl = spikingrl.harness.cli:main',
        ],
        'pytest11': [
            'spikingrl.fixtures          = spikingrl.fixtures',
            'spikingrl.fixtures.numerics = spikingrl.fixtures.numerics',
            'spikingrl.fixtures.ports    = spikingrl.fixtures.ports',
            'spikingrl.fixtures.runs     = spikingrl.fixtures.runs',
        ],
    },
)
