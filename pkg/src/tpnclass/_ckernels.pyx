# cython: language_level=3, boundscheck=False, wraparound=False, initializedcheck=False
"""Compiled closure kernels over raw-encoded bound matrices.

A raw bound is ``2*c + 1`` for ``<= c`` and ``2*c`` for ``< c``; ``INF``
marks the absence of a bound. Must stay in sync with ``_pykernels``.
"""
from libc.stdint cimport int64_t

cdef int64_t INF_ = (<int64_t>1) << 61
INF = INF_


cdef inline int64_t _add(int64_t a, int64_t b) noexcept nogil:
    if a >= INF_ or b >= INF_:
        return INF_
    return a + b - ((a | b) & 1)


cdef bint _close(int64_t[:, ::1] m) noexcept nogil:
    cdef Py_ssize_t n = m.shape[0]
    cdef Py_ssize_t i, j, k
    cdef int64_t mik, s
    for k in range(n):
        for i in range(n):
            mik = m[i, k]
            if mik >= INF_:
                continue
            for j in range(n):
                s = _add(mik, m[k, j])
                if s < m[i, j]:
                    m[i, j] = s
        if m[k, k] < 1:
            return False
    for i in range(n):
        if m[i, i] < 1:
            return False
    return True


def close(int64_t[:, ::1] m):
    """All-pairs shortest-path closure in place; False iff a negative cycle exists."""
    cdef bint ok
    with nogil:
        ok = _close(m)
    return ok


def close_edge(int64_t[:, ::1] m, Py_ssize_t i, Py_ssize_t j):
    """Restore closure after tightening entry (i, j) of a closed matrix."""
    cdef Py_ssize_t n = m.shape[0]
    cdef Py_ssize_t a, b
    cdef int64_t mij = m[i, j], ai, s
    if _add(mij, m[j, i]) < 1:
        m[i, i] = _add(mij, m[j, i])
        return False
    with nogil:
        for a in range(n):
            ai = _add(m[a, i], mij)
            if ai >= INF_:
                continue
            for b in range(n):
                s = _add(ai, m[j, b])
                if s < m[a, b]:
                    m[a, b] = s
    return True
