# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled versions of the hot kernels; see ``_kernels_py`` for the contract."""

import numpy as np
cimport numpy as cnp

cnp.import_array()


def level_tables(sigma, tau, Py_ssize_t n):
    cdef cnp.int64_t[:, :] sig = np.ascontiguousarray(sigma, dtype=np.int64)
    cdef cnp.int64_t[:, :] tr = np.ascontiguousarray(tau, dtype=np.int64)
    cdef Py_ssize_t k = sig.shape[0]
    cdef Py_ssize_t nstates = sig.shape[1]
    cdef Py_ssize_t size = 1
    cdef Py_ssize_t i
    for i in range(n):
        size *= k
    out_perm = np.zeros((nstates, size), dtype=np.int64)
    out_restr = np.zeros((nstates, size), dtype=np.int64)
    cdef cnp.int64_t[:, :] perm = out_perm
    cdef cnp.int64_t[:, :] restr = out_restr
    cdef cnp.int64_t[:, :] prev_perm
    cdef cnp.int64_t[:, :] prev_restr
    cdef Py_ssize_t q, a, y, t, block = 1, level
    cdef cnp.int64_t offset
    for q in range(nstates):
        restr[q, 0] = q
    for level in range(n):
        prev_perm = out_perm[:, :block].copy()
        prev_restr = out_restr[:, :block].copy()
        for q in range(nstates):
            for a in range(k):
                t = tr[a, q]
                offset = sig[a, q] * block
                for y in range(block):
                    perm[q, a * block + y] = offset + prev_perm[t, y]
                    restr[q, a * block + y] = prev_restr[t, y]
        block *= k
    return out_perm, out_restr


cdef Py_ssize_t _find(cnp.int64_t[:] parent, Py_ssize_t x):
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


def components(Py_ssize_t nvertices, src, dst):
    cdef cnp.int64_t[:] s = np.ascontiguousarray(src, dtype=np.int64)
    cdef cnp.int64_t[:] d = np.ascontiguousarray(dst, dtype=np.int64)
    out = np.arange(nvertices, dtype=np.int64)
    cdef cnp.int64_t[:] parent = out
    cdef Py_ssize_t i, ru, rv
    for i in range(s.shape[0]):
        ru = _find(parent, s[i])
        rv = _find(parent, d[i])
        if ru != rv:
            if ru < rv:
                parent[rv] = ru
            else:
                parent[ru] = rv
    for i in range(nvertices):
        parent[i] = _find(parent, i)
    return out
