#!/usr/bin/env python3

from pathlib import Path
from typing import cast

import setuptools

package_name = 'stgcurvature'

exec(Path(f'{package_name}/_metadata.py').read_text(), meta := cast(dict[str, str], {}))

readme = Path('README.md').read_text()
requirements = Path('requirements.txt').read_text().splitlines()

setuptools.setup(
    name=package_name,
    version=meta['__version__'],
    author=meta['__author_name__'],
    author_email=meta['__author_email__'],
    maintainer=meta['__maintainer_name__'],
    maintainer_email=meta['__maintainer_email__'],
    description=meta['__doc__'],
    long_description=readme,
    long_description_content_type='text/markdown',
    python_requires='>=3.12',
    install_requires=requirements,
    packages=[
        package_name,
        f'{package_name}.cli',
        f'{package_name}.enums',
        f'{package_name}.exceptions',
        f'{package_name}.functional',
        f'{package_name}.functions',
        f'{package_name}.kernels',
        f'{package_name}.manifold',
        f'{package_name}.solver',
        f'{package_name}.sphere',
        f'{package_name}.stereographic',
        f'{package_name}.types',
        f'{package_name}.utils'
    ],
    package_data={
        package_name: ['py.typed']
    },
    entry_points={
        'console_scripts': [f'{package_name} = {package_name}.cli:main']
    },
    classifiers=[
        "Natural Language :: English",

        "Intended Audience :: Science/Research",

        "Programming Language :: Python :: 3.12",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
        "Topic :: Scientific/Engineering :: Mathematics",
        "Typing :: Typed",
    ]
)
