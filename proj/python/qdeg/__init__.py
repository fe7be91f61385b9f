# Copyright 2026 The qdeg authors
# SPDX-License-Identifier: Apache-2.0
"""Approximate degradability of quantum channels and capacity bounds.

The compiled extension lives inside this package for pip installs and next
to it on the build-tree import path used by the CMake test target.
"""

try:
    from ._qdeg import *  # noqa: F401,F403
    from ._qdeg import __doc__ as _core_doc  # noqa: F401
except ImportError:  # build-tree layout
    from _qdeg import *  # noqa: F401,F403
    from _qdeg import __doc__ as _core_doc  # noqa: F401

__version__ = "1.0.0"
