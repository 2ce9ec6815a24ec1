# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled per-sample state-space recursion, the package's hot loop."""

import numpy as np

cimport numpy as cnp

cnp.import_array()


def ss_sim(double[:, ::1] A, double[:, ::1] B, double[:, ::1] C,
           double[:, ::1] D, double[:, ::1] u, double[::1] x0):
    """Run x(t+1) = A x(t) + B u(t), y(t) = C x(t) + D u(t) over all samples.

    Shapes: A (n,n), B (n,m), C (p,n), D (p,m), u (T,m), x0 (n,).
    Returns y with shape (T,p).
    """
    cdef Py_ssize_t T = u.shape[0]
    cdef Py_ssize_t n = A.shape[0]
    cdef Py_ssize_t m = B.shape[1]
    cdef Py_ssize_t p = C.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=2] y_arr = np.empty((T, p), dtype=np.float64)
    cdef double[:, ::1] y = y_arr
    cdef cnp.ndarray[cnp.float64_t, ndim=1] x_arr = np.array(x0, dtype=np.float64, copy=True)
    cdef double[::1] x = x_arr
    cdef cnp.ndarray[cnp.float64_t, ndim=1] xn_arr = np.zeros(n, dtype=np.float64)
    cdef double[::1] xn = xn_arr
    cdef Py_ssize_t t, i, j
    cdef double acc
    cdef double[::1] tmp

    for t in range(T):
        for i in range(p):
            acc = 0.0
            for j in range(n):
                acc += C[i, j] * x[j]
            for j in range(m):
                acc += D[i, j] * u[t, j]
            y[t, i] = acc
        for i in range(n):
            acc = 0.0
            for j in range(n):
                acc += A[i, j] * x[j]
            for j in range(m):
                acc += B[i, j] * u[t, j]
            xn[i] = acc
        tmp = x
        x = xn
        xn = tmp
    return y_arr
