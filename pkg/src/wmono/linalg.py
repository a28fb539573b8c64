"""Dense complex kernel: tensor products, partial traces, spectra, Haar unitaries.

Amplitudes of a composite system are stored flat in mixed-radix order with
subsystem 0 as the most significant digit, so ``|d_0 d_1 ... d_{n-1}>`` sits
at ``sum_k d_k * prod(dims[k+1:])``. Matrices are plain ``numpy`` arrays.
Subsystem positions throughout this module are 0-based.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import config
from . import kernels
from .errors import DimensionMismatchError, NotHermitianError, WMonoError


def _as_dims(local_dims: Iterable[int]) -> tuple[int, ...]:
    dims = tuple(int(d) for d in local_dims)
    if not dims:
        raise DimensionMismatchError("local_dims must be non-empty")
    if any(d < 1 for d in dims):
        raise DimensionMismatchError(f"local dimensions must be positive, got {dims}")
    return dims


class SubsystemIndexSet(tuple):
    """Strictly increasing tuple of 0-based subsystem positions."""

    def __new__(cls, indices: Iterable[int], n: int | None = None):
        idx = tuple(int(i) for i in indices)
        if any(b <= a for a, b in zip(idx, idx[1:])):
            raise WMonoError(f"subsystem indices must be strictly increasing, got {idx}")
        if idx and idx[0] < 0:
            raise WMonoError(f"subsystem indices must be non-negative, got {idx}")
        if n is not None and idx and idx[-1] >= n:
            raise WMonoError(f"subsystem index {idx[-1]} out of range for {n} subsystems")
        return super().__new__(cls, idx)

    @classmethod
    def of(cls, indices: Iterable[int], n: int | None = None) -> "SubsystemIndexSet":
        """Build from an unordered collection, sorting and rejecting duplicates."""
        raw = list(indices)
        if len(set(raw)) != len(raw):
            raise WMonoError(f"duplicate subsystem indices in {raw}")
        return cls(sorted(raw), n)


@dataclass(frozen=True)
class StateVector:
    """Normalized pure state on a composite system."""

    local_dims: tuple[int, ...]
    amplitudes: np.ndarray

    def __post_init__(self):
        dims = _as_dims(self.local_dims)
        amps = np.array(self.amplitudes, dtype=complex).reshape(-1)
        if amps.size != math.prod(dims):
            raise DimensionMismatchError(
                f"{amps.size} amplitudes do not match local_dims {dims}"
            )
        config.check_cap(amps.size)
        norm2 = float(np.vdot(amps, amps).real)
        if abs(norm2 - 1.0) > config.NORM_TOL:
            raise WMonoError(f"state vector not normalized (squared norm {norm2!r})")
        amps.setflags(write=False)
        object.__setattr__(self, "local_dims", dims)
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def normalized(cls, local_dims: Sequence[int], amplitudes) -> "StateVector":
        amps = np.asarray(amplitudes, dtype=complex).reshape(-1)
        nrm = np.linalg.norm(amps)
        if nrm == 0.0:
            raise WMonoError("cannot normalize the zero vector")
        return cls(tuple(local_dims), amps / nrm)

    @property
    def n(self) -> int:
        return len(self.local_dims)

    def projector(self) -> np.ndarray:
        return np.outer(self.amplitudes, self.amplitudes.conj())


def kron(a, b) -> np.ndarray:
    a = np.atleast_2d(np.asarray(a, dtype=complex))
    b = np.atleast_2d(np.asarray(b, dtype=complex))
    config.check_cap(max(a.shape[0] * b.shape[0], a.shape[1] * b.shape[1]), "Kronecker product")
    return np.kron(a, b)


def kron_all(*factors) -> np.ndarray:
    out = np.ones((1, 1), dtype=complex)
    for f in factors:
        out = kron(out, f)
    return out


def _check_square(m: np.ndarray, what: str = "matrix") -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatchError(f"{what} must be square, got shape {m.shape}")
    return m


def partial_trace(rho, local_dims: Sequence[int], keep: Iterable[int]) -> np.ndarray:
    """Reduce ``rho`` to the subsystems in ``keep`` (0-based, returned in ascending order)."""
    dims = _as_dims(local_dims)
    rho = _check_square(rho, "rho")
    total = math.prod(dims)
    if rho.shape[0] != total:
        raise DimensionMismatchError(
            f"rho has dimension {rho.shape[0]}, local_dims {dims} give {total}"
        )
    keep = SubsystemIndexSet.of(keep, len(dims))
    if not keep:
        raise WMonoError("keep set must be non-empty")
    n = len(dims)
    traced = [k for k in range(n) if k not in keep]
    t = rho.reshape(dims + dims)
    # Keep axes first, traced axes paired at the end, then contract the pairs.
    perm = list(keep) + [k + n for k in keep] + traced + [k + n for k in traced]
    t = t.transpose(perm)
    dk = math.prod(dims[k] for k in keep)
    dt = math.prod(dims[k] for k in traced) if traced else 1
    t = t.reshape(dk, dk, dt, dt)
    return np.trace(t, axis1=2, axis2=3)


def reduce_pure(state: StateVector, keep: Iterable[int]) -> np.ndarray:
    """Reduced density matrix of a pure state without forming the full projector."""
    keep = SubsystemIndexSet.of(keep, state.n)
    if not keep:
        raise WMonoError("keep set must be non-empty")
    m = bipartite_matrix(state.amplitudes, state.local_dims, keep)
    return m @ m.conj().T


def bipartite_matrix(amplitudes, local_dims: Sequence[int], side_a: Sequence[int]) -> np.ndarray:
    """Reshape amplitudes into a (dim side_a) x (dim rest) coefficient matrix."""
    dims = _as_dims(local_dims)
    a = list(side_a)
    rest = [k for k in range(len(dims)) if k not in a]
    t = np.asarray(amplitudes, dtype=complex).reshape(dims).transpose(a + rest)
    da = math.prod(dims[k] for k in a)
    return np.ascontiguousarray(t.reshape(da, -1))


def purity(rho) -> float:
    rho = _check_square(rho, "rho")
    # tr(rho^2) = sum_ij rho_ij rho_ji
    return float(np.real(np.sum(rho * rho.T)))


def is_density_matrix(rho, tol: float = config.MATRIX_TOL) -> bool:
    try:
        rho = _check_square(rho)
    except DimensionMismatchError:
        return False
    if np.max(np.abs(rho - rho.conj().T), initial=0.0) > tol:
        return False
    if abs(np.trace(rho).real - 1.0) > tol:
        return False
    return bool(np.linalg.eigvalsh(rho)[0] >= -tol)


def hermitian_eigenvalues(m, tol: float = config.MATRIX_TOL) -> np.ndarray:
    """Eigenvalues of a Hermitian matrix, sorted descending."""
    m = _check_square(m)
    dev = np.max(np.abs(m - m.conj().T), initial=0.0)
    if dev > tol:
        raise NotHermitianError(f"matrix is not Hermitian (max deviation {dev:.3e})")
    return np.linalg.eigvalsh(0.5 * (m + m.conj().T))[::-1]


def hermitian_eigh(m, tol: float = config.MATRIX_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Eigenpairs sorted by descending eigenvalue; columns of the second result are eigenvectors."""
    m = _check_square(m)
    dev = np.max(np.abs(m - m.conj().T), initial=0.0)
    if dev > tol:
        raise NotHermitianError(f"matrix is not Hermitian (max deviation {dev:.3e})")
    w, v = np.linalg.eigh(0.5 * (m + m.conj().T))
    return w[::-1], v[:, ::-1]


def haar_unitary(r: int, seed: int | np.random.Generator) -> np.ndarray:
    """Haar-distributed r x r unitary.

    QR of a complex Ginibre matrix, with the phases of R's diagonal moved into
    Q so the distribution is exactly Haar rather than QR-convention dependent.
    An integer seed gives a deterministic result.
    """
    if r < 1:
        raise WMonoError(f"unitary size must be >= 1, got {r}")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    z = (rng.standard_normal((r, r)) + 1j * rng.standard_normal((r, r))) / math.sqrt(2.0)
    q, rr = np.linalg.qr(z)
    d = np.diagonal(rr)
    phases = d / np.abs(d)
    return q * phases[np.newaxis, :]


def is_unitary(u, tol: float = 1e-10) -> bool:
    u = np.asarray(u, dtype=complex)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        return False
    return bool(np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))) <= tol)


def hermitian_expm(h) -> np.ndarray:
    """exp(i h) for Hermitian h, via its eigendecomposition."""
    w, v = np.linalg.eigh(h)
    return (v * np.exp(1j * w)[np.newaxis, :]) @ v.conj().T


def pure_concurrence(state: StateVector, side_a: Sequence[int]) -> float:
    """Concurrence of a pure state across side_a | rest, via the active kernel."""
    m = bipartite_matrix(state.amplitudes, state.local_dims, side_a)
    return kernels.weighted_concurrence(m.reshape(-1), m.shape[0], m.shape[1])
