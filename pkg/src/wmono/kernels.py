"""Backend selection for the hot kernels.

The compiled ``_ckernels`` extension is used when it imports; otherwise, or
when the environment variable ``WMONO_PURE_PYTHON`` is set to a non-empty
value other than ``0``, the numpy versions in ``_pykernels`` are used.
``BACKEND`` names the active choice. Cuts whose minor expansion would exceed
``MINOR_TERM_LIMIT`` terms always go to the numpy (SVD) path.
"""

import os

from . import _pykernels

MINOR_TERM_LIMIT = 1 << 18

_force_python = os.environ.get("WMONO_PURE_PYTHON", "") not in ("", "0")

try:
    if _force_python:
        raise ImportError("pure-Python backend requested")
    from . import _ckernels as _compiled
except ImportError:
    _compiled = None

BACKEND = "python" if _compiled is None else "cython"


def _minor_terms(dim_a, dim_b):
    return (dim_a * (dim_a - 1) // 2) * (dim_b * (dim_b - 1) // 2)


def weighted_concurrence(psi, dim_a, dim_b):
    """||psi||^2 times the concurrence of psi/||psi|| across a dim_a x dim_b split."""
    if _compiled is not None and _minor_terms(dim_a, dim_b) <= MINOR_TERM_LIMIT:
        return _compiled.weighted_concurrence(psi, dim_a, dim_b)
    return _pykernels.weighted_concurrence(psi, dim_a, dim_b)


def ensemble_average(basis, u, dim_a, dim_b, p_floor):
    """Sum_h p_h C(phi_h) over the members |phi~_h> = sum_l u[h, l] basis[l] with p_h >= p_floor."""
    if _compiled is not None and _minor_terms(dim_a, dim_b) <= MINOR_TERM_LIMIT:
        return _compiled.ensemble_average(basis, u, dim_a, dim_b, p_floor)
    return _pykernels.ensemble_average(basis, u, dim_a, dim_b, p_floor)


__all__ = ["BACKEND", "MINOR_TERM_LIMIT", "weighted_concurrence", "ensemble_average"]
