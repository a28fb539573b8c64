# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled inner loops for weighted pure-state concurrence and HJW ensemble averages.

Vectors are unnormalized: for |phi~> = sqrt(p)|phi> viewed as a da x db
coefficient matrix M, p * C(phi) = 2 sqrt(sum of |2x2 minors of M|^2)
(Cauchy-Binet). Every term is non-negative, so states close to product keep
full absolute precision. Cost grows as C(da,2) C(db,2); the Python wrapper
routes large cuts elsewhere.
"""

from libc.math cimport sqrt
from libc.stdlib cimport malloc, free


cdef inline double _abs2(double complex z) noexcept nogil:
    return z.real * z.real + z.imag * z.imag


cdef double _minor_sum(const double complex* m, Py_ssize_t da, Py_ssize_t db) noexcept nogil:
    cdef Py_ssize_t a, c, b, e
    cdef double total = 0.0
    cdef double complex mab, mcb
    for a in range(da):
        for c in range(a + 1, da):
            for b in range(db):
                mab = m[a * db + b]
                mcb = m[c * db + b]
                for e in range(b + 1, db):
                    total += _abs2(mab * m[c * db + e] - m[a * db + e] * mcb)
    return total


def weighted_concurrence(const double complex[::1] psi, Py_ssize_t dim_a, Py_ssize_t dim_b):
    """<psi|psi> * C(psi / |psi|) for a row-major dim_a x dim_b coefficient vector."""
    if psi.shape[0] != dim_a * dim_b:
        raise ValueError("vector length does not match dim_a * dim_b")
    return 2.0 * sqrt(_minor_sum(&psi[0], dim_a, dim_b))


def ensemble_average(const double complex[:, ::1] basis, const double complex[:, ::1] u,
                     Py_ssize_t dim_a, Py_ssize_t dim_b, double p_floor):
    """Sum over h of p_h C(phi_h), with |phi~_h> = sum_l u[h, l] basis[l]."""
    cdef Py_ssize_t k = basis.shape[0]
    cdef Py_ssize_t dim = basis.shape[1]
    cdef Py_ssize_t r = u.shape[0]
    cdef Py_ssize_t h, l, j
    cdef double p, total = 0.0
    cdef double complex* phi
    if u.shape[1] != k:
        raise ValueError("unitary column count does not match basis size")
    if dim != dim_a * dim_b:
        raise ValueError("basis length does not match dim_a * dim_b")
    phi = <double complex*> malloc(dim * sizeof(double complex))
    if phi == NULL:
        raise MemoryError()
    try:
        with nogil:
            for h in range(r):
                for j in range(dim):
                    phi[j] = 0.0
                for l in range(k):
                    for j in range(dim):
                        phi[j] = phi[j] + u[h, l] * basis[l, j]
                p = 0.0
                for j in range(dim):
                    p += _abs2(phi[j])
                if p < p_floor:
                    continue
                total += 2.0 * sqrt(_minor_sum(phi, dim_a, dim_b))
    finally:
        free(phi)
    return total
