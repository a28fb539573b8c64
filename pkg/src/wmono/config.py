"""Tolerances, the Hilbert-space cap, and deterministic seed splitting."""

from __future__ import annotations

import hashlib
import os
from dataclasses import asdict, dataclass

from .errors import DimensionCapError

DEFAULT_DIM_CAP = 2**20
DIM_CAP_ENV = "WMONO_DIM_CAP"

# Density-matrix checks (Hermiticity, unit trace, PSD).
MATRIX_TOL = 1e-10
# State-vector and spec normalization.
NORM_TOL = 1e-12
# Third eigenvalue bound for "rank <= 2".
RANK_TOL = 1e-10
# Ensemble members below this weight are dropped before averaging.
PROB_FLOOR = 1e-14


@dataclass(frozen=True)
class Tolerances:
    """Equality tolerances used by monogamy reports.

    ``algebraic`` applies to closed-form and brute-force paths, ``optimizer``
    to values estimated by the decomposition search, and ``spread`` to the
    gap between the optimizer's min and max on decomposition-invariant states.
    Comparisons are absolute and strict (``residual < tol``).
    """

    algebraic: float = 1e-9
    optimizer: float = 1e-4
    spread: float = 1e-6

    def as_dict(self) -> dict[str, float]:
        return asdict(self)


DEFAULT_TOLERANCES = Tolerances()


def dim_cap() -> int:
    """Current amplitude cap; ``WMONO_DIM_CAP`` overrides the default."""
    raw = os.environ.get(DIM_CAP_ENV)
    if raw is None or raw == "":
        return DEFAULT_DIM_CAP
    try:
        cap = int(raw)
    except ValueError:
        raise DimensionCapError(f"{DIM_CAP_ENV} must be an integer, got {raw!r}") from None
    if cap < 1:
        raise DimensionCapError(f"{DIM_CAP_ENV} must be positive, got {cap}")
    return cap


def check_cap(size: int, what: str = "Hilbert space") -> None:
    cap = dim_cap()
    if size > cap:
        raise DimensionCapError(
            f"Hilbert-space cap exceeded: {what} needs {size} amplitudes, cap is {cap}"
        )


def derive_seed(master: int, *path: object) -> int:
    """Split a master seed into an independent 63-bit seed for one consumer.

    The child seed is the first eight bytes of ``sha256("<master>/<p1>/<p2>...")``
    read big-endian, with the top bit cleared. The same (master, path) always
    gives the same seed, in any process and under any scheduling.

    >>> derive_seed(7, "sweep", 3) == derive_seed(7, "sweep", 3)
    True
    """
    key = "/".join([str(int(master))] + [str(p) for p in path])
    digest = hashlib.sha256(key.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big") & ((1 << 63) - 1)
