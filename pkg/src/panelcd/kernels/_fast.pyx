# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled lane of the hot kernels (see package docstring)."""

import numpy as np

cimport numpy as cnp
from scipy.linalg.cython_blas cimport dgemm

cnp.import_array()


def trace_powers(corr):
    """Return (tr(C^2), tr(C^4)) for a symmetric matrix C."""
    cdef double[:, ::1] c = np.ascontiguousarray(corr, dtype=np.float64)
    cdef int n = c.shape[0]
    sq_arr = np.empty((n, n), dtype=np.float64)
    cdef double[:, ::1] sq = sq_arr
    cdef char trans = b'N'
    cdef double one = 1.0, zero = 0.0
    cdef double tr2 = 0.0, tr4 = 0.0
    cdef Py_ssize_t i, j
    if n > 0:
        # C is symmetric, so the C/Fortran layout mismatch is immaterial.
        dgemm(&trans, &trans, &n, &n, &n, &one, &c[0, 0], &n,
              &c[0, 0], &n, &zero, &sq[0, 0], &n)
    for i in range(n):
        tr2 += sq[i, i]
        for j in range(n):
            tr4 += sq[i, j] * sq[i, j]
    return tr2, tr4


def offdiag_sums(corr):
    """Sum and sum of squares of the off-diagonal entries."""
    cdef double[:, ::1] c = np.ascontiguousarray(corr, dtype=np.float64)
    cdef Py_ssize_t n = c.shape[0]
    cdef double s1 = 0.0, s2 = 0.0, v
    cdef Py_ssize_t i, j
    for i in range(n):
        for j in range(n):
            if i != j:
                v = c[i, j]
                s1 += v
                s2 += v * v
    return s1, s2


def pair_projector_traces(designs, inv_grams):
    """tr(P_r P_s) and tr((P_r P_s)^2) for all unit pairs, via k x k products."""
    cdef double[:, :, ::1] x = np.ascontiguousarray(designs, dtype=np.float64)
    cdef double[:, :, ::1] a = np.ascontiguousarray(inv_grams, dtype=np.float64)
    cdef Py_ssize_t n = x.shape[0]
    cdef Py_ssize_t k = x.shape[1]
    cdef Py_ssize_t T = x.shape[2]
    t2_arr = np.empty((n, n), dtype=np.float64)
    t4_arr = np.empty((n, n), dtype=np.float64)
    cdef double[:, ::1] t2 = t2_arr
    cdef double[:, ::1] t4 = t4_arr
    cross_arr = np.empty((k, k), dtype=np.float64)
    m1_arr = np.empty((k, k), dtype=np.float64)
    m2_arr = np.empty((k, k), dtype=np.float64)
    q_arr = np.empty((k, k), dtype=np.float64)
    cdef double[:, ::1] cross = cross_arr
    cdef double[:, ::1] m1 = m1_arr
    cdef double[:, ::1] m2 = m2_arr
    cdef double[:, ::1] q = q_arr
    cdef Py_ssize_t r, s, i, j, l, t
    cdef double acc, tr, trsq

    for r in range(n):
        t2[r, r] = <double>k
        t4[r, r] = <double>k
        for s in range(r + 1, n):
            # cross = X_r X_s'
            for i in range(k):
                for j in range(k):
                    acc = 0.0
                    for t in range(T):
                        acc += x[r, i, t] * x[s, j, t]
                    cross[i, j] = acc
            # m1 = A_r cross, m2 = A_s cross'
            for i in range(k):
                for j in range(k):
                    acc = 0.0
                    for l in range(k):
                        acc += a[r, i, l] * cross[l, j]
                    m1[i, j] = acc
            for i in range(k):
                for j in range(k):
                    acc = 0.0
                    for l in range(k):
                        acc += a[s, i, l] * cross[j, l]
                    m2[i, j] = acc
            # q = m1 m2; tr(q) = tr(P_r P_s), tr(q^2) = tr((P_r P_s)^2)
            tr = 0.0
            for i in range(k):
                for j in range(k):
                    acc = 0.0
                    for l in range(k):
                        acc += m1[i, l] * m2[l, j]
                    q[i, j] = acc
                tr += q[i, i]
            trsq = 0.0
            for i in range(k):
                for j in range(k):
                    trsq += q[i, j] * q[j, i]
            t2[r, s] = tr
            t2[s, r] = tr
            t4[r, s] = trsq
            t4[s, r] = trsq
    return t2_arr, t4_arr
