# Copyright 2026 The qdeg authors
# SPDX-License-Identifier: Apache-2.0
"""Builds the compiled extension; packaging metadata lives in pyproject.toml."""

import os
from glob import glob

from pybind11.setup_helpers import (ParallelCompile, Pybind11Extension,
                                    build_ext)
from setuptools import setup

ParallelCompile("NPY_NUM_BUILD_JOBS", default=4).install()

_EIGEN_CANDIDATES = ["/usr/include/eigen3", "/usr/local/include/eigen3"]
_EIGEN = next((p for p in _EIGEN_CANDIDATES if os.path.isdir(p)),
              _EIGEN_CANDIDATES[0])

ext = Pybind11Extension(
    "qdeg._qdeg",
    sorted(glob("src/*.cpp")) + ["python/qdeg_module.cpp"],
    include_dirs=["include", "vendor", _EIGEN],
    cxx_std=20,
)

setup(ext_modules=[ext], cmdclass={"build_ext": build_ext})
