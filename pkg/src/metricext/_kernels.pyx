# cython: boundscheck=False, wraparound=False, initializedcheck=False
"""Compiled pair integration over encoded step functions.

A step function is encoded as right endpoints ``ends`` (last entry exactly 1.0)
and integer ``labels``; ``table[i, j]`` is the pair function on labels.
"""
import numpy as np


cdef inline double _merge(const double[::1] ends1, const Py_ssize_t[::1] labels1,
                          Py_ssize_t i, Py_ssize_t stop1,
                          const double[::1] ends2, const Py_ssize_t[::1] labels2,
                          Py_ssize_t j, Py_ssize_t stop2,
                          const double[:, ::1] table) noexcept nogil:
    cdef double prev = 0.0, acc = 0.0, cut
    while i < stop1 and j < stop2:
        cut = ends1[i] if ends1[i] < ends2[j] else ends2[j]
        acc += (cut - prev) * table[labels1[i], labels2[j]]
        prev = cut
        if ends1[i] == cut:
            i += 1
        if ends2[j] == cut:
            j += 1
    return acc


def integrate_one(const double[::1] ends1, const Py_ssize_t[::1] labels1,
                  const double[::1] ends2, const Py_ssize_t[::1] labels2,
                  const double[:, ::1] table):
    return _merge(ends1, labels1, 0, ends1.shape[0], ends2, labels2, 0, ends2.shape[0], table)


def integrate_all(const Py_ssize_t[::1] offsets, const double[::1] ends,
                  const Py_ssize_t[::1] labels, const double[:, ::1] table,
                  bint symmetric=False):
    cdef Py_ssize_t n = offsets.shape[0] - 1
    out = np.empty((n, n), dtype=np.float64)
    cdef double[:, ::1] res = out
    cdef Py_ssize_t y, z, start
    with nogil:
        for y in range(n):
            start = y if symmetric else 0
            for z in range(start, n):
                res[y, z] = _merge(ends, labels, offsets[y], offsets[y + 1],
                                   ends, labels, offsets[z], offsets[z + 1], table)
                if symmetric:
                    res[z, y] = res[y, z]
    return out
