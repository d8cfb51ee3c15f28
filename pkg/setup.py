from pathlib import Path

from setuptools import find_packages, setup

from classical_drg import __version__

with open(Path(__file__).parent / "README.md") as f:
    long_description = f.read()

setup(
    name="classical_drg",
    version=__version__,
    license="MIT",
    description="Gibbs states, quantum central limit theorems and limit measures of distance-regular graphs "
                "with classical parameters",
    long_description=long_description,
    long_description_content_type="text/markdown",
    keywords=("distance-regular graphs classical parameters gibbs state"
              " quantum probability central limit theorem q-series"),
    packages=find_packages(exclude=("tests", "tests.*")),
    python_requires=">=3.8",
    install_requires=[
        "marshmallow>=3.13,<4",
        "numpy",
        "networkx",
        "python-dotenv",
    ],
    entry_points={
        "console_scripts": [
            "classical-drg=classical_drg.cli:main",
        ],
    },
    classifiers=[
        "Development Status :: 3 - Alpha",
        "Environment :: Console",
        "Intended Audience :: Science/Research",
        "Operating System :: OS Independent",
        "Programming Language :: Python :: 3.8",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Topic :: Scientific/Engineering :: Mathematics",
        "License :: OSI Approved :: MIT License",
    ]
)
