import math

import numpy as np
import pytest

from wmono.states import MixtureSpec, WClassSpec


@pytest.fixture
def w3():
    """Symmetric 3-qubit W state, all amplitudes 1/sqrt(3)."""
    return WClassSpec.from_coeffs([1.0, 1.0, 1.0])


@pytest.fixture
def w4():
    return WClassSpec.from_coeffs([0.5, 0.5, 0.5, 0.5])


@pytest.fixture
def w3_half(w3):
    return MixtureSpec(w3, 0.5)


def bell_state():
    v = np.zeros(4, dtype=complex)
    v[1] = v[2] = 1 / math.sqrt(2)
    return v


def naive_partial_trace(rho, dims, keep):
    """Explicit index summation over the traced digits."""
    n = len(dims)
    keep = list(keep)
    traced = [k for k in range(n) if k not in keep]

    def flat(digits):
        idx = 0
        for k in range(n):
            idx = idx * dims[k] + digits[k]
        return idx

    def digit_tuples(which):
        if not which:
            yield ()
            return
        first, rest = which[0], which[1:]
        for v in range(dims[first]):
            for tail in digit_tuples(rest):
                yield (v,) + tail

    kept = list(digit_tuples(keep))
    out = np.zeros((len(kept), len(kept)), dtype=complex)
    for a, ka in enumerate(kept):
        for b, kb in enumerate(kept):
            total = 0.0
            for tr in digit_tuples(traced):
                da = [0] * n
                db = [0] * n
                for pos, k in enumerate(keep):
                    da[k], db[k] = ka[pos], kb[pos]
                for pos, k in enumerate(traced):
                    da[k] = db[k] = tr[pos]
                total += rho[flat(da), flat(db)]
            out[a, b] = total
    return out
