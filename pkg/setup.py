"""
Rotation-robust local feature matching with orthographic views.
This file is adapted from

https://github.com/pypa/sampleproject/
"""

# Always prefer setuptools over distutils
from setuptools import setup, find_packages
# To use a consistent encoding
from codecs import open
from os import path
import re

here = path.abspath(path.dirname(__file__))

# Get the long description from the README file
with open(path.join(here, 'README.rst'), encoding='utf-8') as f:
    long_description = f.read()

# Single-source the version from the package
with open(path.join(here, 'orthomatch', 'version.py'), encoding='utf-8') as f:
    version = re.search(r"__version__ = '([^']+)'", f.read()).group(1)

setup(
    name='orthomatch',
    version=version,

    description='Rotation-robust feature matching with orthographic views',
    long_description=long_description,

    url='',
    license='GPLv3',

    classifiers=[
        'Development Status :: 3 - Alpha',
        'Intended Audience :: Science/Research',
        'Topic :: Scientific/Engineering',
        'Topic :: Scientific/Engineering :: Image Recognition',
        'License :: OSI Approved :: GNU General Public License v3 (GPLv3)',
        'Programming Language :: Python :: 3',
    ],

    keywords='feature matching rotation invariance homography orthographic',

    packages=find_packages(exclude=['contrib', 'docs', 'tests', 'tests.*']),
    python_requires='>=3.6',

    # List run-time dependencies here.
    install_requires=[
        'numpy>=1.17',
        'scipy',
        'pandas',
        'opencv-python-headless',
        'tqdm',
    ],

    # $ pip install -e .[dev,test]
    extras_require={
        'dev': ['check-manifest'],
        'test': ['pytest', 'coverage'],
    },

    entry_points={
        'console_scripts': [
            'orthomatch=orthomatch.cli:main',
        ],
    },
)
