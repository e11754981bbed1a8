#!/usr/bin/env python
import os.path

from setuptools import setup, find_packages


with open(os.path.join(os.path.dirname(__file__), 'requirements')) as f:
    install_requires = [line.strip() for line in f.readlines() if line.strip()]

setup(
    name='reducedbpre',
    version='1.0.0',
    description='reducedbpre, a Monte Carlo and quadrature workbench for '
                'reduced branching processes in random environment',
    license='WTFPL',

    platforms=['any'],
    install_requires=install_requires,
    python_requires='>=3.8',
    zip_safe=False,
    include_package_data=True,

    packages=find_packages(exclude=['examples', 'examples.*']),
    py_modules=['manage'],
    entry_points = {
        'console_scripts': [
            'reducedbpre_manage = manage:main',
        ],
    },
)
