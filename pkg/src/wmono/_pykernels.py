"""Numpy implementation of the kernels in ``_ckernels.pyx``.

Same signatures and semantics, computed from singular values instead of
minors: for Schmidt coefficients s_k of the unnormalized vector,
p * C = 2 sqrt(sum_{k<l} s_k^2 s_l^2), accumulated without cancellation.
Used when the compiled module is unavailable, when ``WMONO_PURE_PYTHON``
is set, and for cuts too large for the minor expansion.
"""

import numpy as np


def _pair_sum(s2):
    # sum_{k<l} s2_k s2_l along the last axis, all terms non-negative
    prefix = np.cumsum(s2, axis=-1) - s2
    return np.sum(s2 * prefix, axis=-1)


def weighted_concurrence(psi, dim_a, dim_b):
    m = np.asarray(psi, dtype=complex).reshape(dim_a, dim_b)
    s = np.linalg.svd(m, compute_uv=False)
    return float(2.0 * np.sqrt(_pair_sum(s * s)))


def ensemble_average(basis, u, dim_a, dim_b, p_floor):
    basis = np.asarray(basis, dtype=complex)
    u = np.asarray(u, dtype=complex)
    if u.shape[1] != basis.shape[0]:
        raise ValueError("unitary column count does not match basis size")
    if basis.shape[1] != dim_a * dim_b:
        raise ValueError("basis length does not match dim_a * dim_b")
    phis = u @ basis
    p = np.sum(np.abs(phis) ** 2, axis=1)
    s = np.linalg.svd(phis.reshape(u.shape[0], dim_a, dim_b), compute_uv=False)
    vals = 2.0 * np.sqrt(_pair_sum(s * s))
    return float(np.sum(vals[p >= p_floor]))
