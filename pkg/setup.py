#!/usr/bin/env python
# -*- coding: utf-8 -*-

from setuptools import setup

setup(
    name="sslf",
    version="0.1",
    description="Sharpness-aware second-order latent factor models for sparse rating matrices",
    long_description=open("README", encoding="utf-8").read(),
    classifiers=[
        "Development Status :: 4 - Beta",
        "Environment :: Console",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: MIT License",
        "Natural Language :: English",
        "Operating System :: OS Independent",
        "Programming Language :: Python :: 3",
        "Topic :: Scientific/Engineering :: Mathematics",
    ],
    license="MIT",
    packages=["sslf"],
    package_data={"sslf": ["data/*.tsv"]},
    python_requires=">=3.8",
    install_requires=["numpy>=1.20", "scipy>=1.6"],
    extras_require={"tests": ["pytest"]},
    entry_points={"console_scripts": ["sslf = sslf.cli:main"]},
    zip_safe=False,
    keywords="matrix factorization hessian-free conjugate gradient sharpness-aware",
)
