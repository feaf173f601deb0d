"""Hot kernels, compiled when possible.

The Cython extension ``selfsim._kernels`` is used if it was built; otherwise
the pure-Python implementations are used. Set ``SELFSIM_PURE_PYTHON=1`` to
force the fallback. Both paths return numpy arrays.
"""

from __future__ import annotations

import os

import numpy as np

from . import _kernels_py

BACKEND = "python"
_compiled = None
if not os.environ.get("SELFSIM_PURE_PYTHON"):
    try:
        from . import _kernels as _compiled  # type: ignore[attr-defined]

        BACKEND = "cython"
    except ImportError:
        _compiled = None


def level_tables(sigma, tau, n: int, backend: str | None = None):
    """Return ``(perm, restr)`` int64 arrays of shape ``(states, k**n)``."""
    if _use_compiled(backend):
        return _compiled.level_tables(sigma, tau, n)
    perm, restr = _kernels_py.level_tables(
        [list(map(int, row)) for row in sigma], [list(map(int, row)) for row in tau], n
    )
    return np.asarray(perm, dtype=np.int64), np.asarray(restr, dtype=np.int64)


def components(nvertices: int, src, dst, backend: str | None = None) -> np.ndarray:
    """Component label of each vertex: the smallest vertex in its component."""
    if _use_compiled(backend):
        return _compiled.components(nvertices, src, dst)
    labels = _kernels_py.components(nvertices, [int(x) for x in src], [int(x) for x in dst])
    return np.asarray(labels, dtype=np.int64)


def _use_compiled(backend):
    if backend is None:
        return _compiled is not None
    if backend == "cython":
        if _compiled is None:
            raise RuntimeError("compiled kernels are not available")
        return True
    if backend == "python":
        return False
    raise ValueError(f"unknown backend {backend!r}")
