"""Concurrence, concurrence of assistance, and decompositions of rank-2 states.

Pure states use ``C = sqrt(2 (1 - tr rho_A^2))``. Mixed rank-2 states are
handled through the HJW parametrization: every decomposition is
``|phi~_h> = u_h1 |x~> + u_h2 |y~>`` for a unitary ``u`` and a fixed pair of
unnormalized spanning vectors, here the root-eigenvalue-scaled top two
eigenvectors. Cuts use 0-based subsystem positions; W-class subsystem labels
(``s``, ``t``) are 1-based as in :mod:`wmono.states`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import config, kernels
from .config import derive_seed
from .errors import CutError, DimensionMismatchError, RankError, SpecError, WMonoError
from .linalg import (
    StateVector,
    SubsystemIndexSet,
    haar_unitary,
    hermitian_eigh,
    hermitian_expm,
    is_unitary,
    pure_concurrence,
)
from .states import MixtureSpec, WClassSpec

SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]])
_YY = np.kron(SIGMA_Y, SIGMA_Y)


@dataclass(frozen=True)
class BipartiteCut:
    side_a: SubsystemIndexSet
    side_b: SubsystemIndexSet

    def __post_init__(self):
        a = SubsystemIndexSet.of(self.side_a)
        b = SubsystemIndexSet.of(self.side_b)
        if not a or not b:
            raise CutError("both sides of a cut must be non-empty")
        if set(a) & set(b):
            raise CutError(f"cut sides overlap: {tuple(a)} and {tuple(b)}")
        union = sorted(set(a) | set(b))
        if union != list(range(len(union))):
            raise CutError(f"cut does not cover subsystems 0..{len(union) - 1}: {tuple(a)} | {tuple(b)}")
        object.__setattr__(self, "side_a", a)
        object.__setattr__(self, "side_b", b)

    @classmethod
    def of(cls, side_a: Iterable[int], n: int) -> "BipartiteCut":
        """``side_a`` against everything else among ``n`` subsystems."""
        a = SubsystemIndexSet.of(side_a, n)
        return cls(a, SubsystemIndexSet(k for k in range(n) if k not in a))

    @property
    def n(self) -> int:
        return len(self.side_a) + len(self.side_b)

    def swapped(self) -> "BipartiteCut":
        return BipartiteCut(self.side_b, self.side_a)

    def check(self, local_dims: Sequence[int]) -> None:
        if len(local_dims) != self.n:
            raise CutError(f"cut covers {self.n} subsystems, state has {len(local_dims)}")


@dataclass(frozen=True)
class DecompositionEnsemble:
    """Weighted pure states ``{(p_h, |phi_h>)}``."""

    members: tuple[tuple[float, StateVector], ...]

    def __post_init__(self):
        members = tuple((float(p), phi) for p, phi in self.members)
        if not members:
            raise WMonoError("ensemble has no members")
        if any(p < 0 for p, _ in members):
            raise WMonoError("ensemble weights must be non-negative")
        total = sum(p for p, _ in members)
        if abs(total - 1.0) > config.MATRIX_TOL:
            raise WMonoError(f"ensemble weights sum to {total!r}, not 1")
        dims = {phi.local_dims for _, phi in members}
        if len(dims) != 1:
            raise DimensionMismatchError("ensemble members have different local_dims")
        object.__setattr__(self, "members", members)

    @property
    def local_dims(self) -> tuple[int, ...]:
        return self.members[0][1].local_dims

    @property
    def probabilities(self) -> np.ndarray:
        return np.array([p for p, _ in self.members])

    def density_matrix(self) -> np.ndarray:
        return sum(p * phi.projector() for p, phi in self.members)

    def reconstructs(self, rho, tol: float = config.MATRIX_TOL) -> bool:
        return bool(np.max(np.abs(self.density_matrix() - np.asarray(rho))) <= tol)

    def __len__(self):
        return len(self.members)


def _infer_dims(dim: int, n: int) -> tuple[int, ...]:
    d = round(dim ** (1.0 / n))
    for cand in (d - 1, d, d + 1):
        if cand >= 1 and cand**n == dim:
            return (cand,) * n
    raise DimensionMismatchError(
        f"cannot split dimension {dim} into {n} equal local dimensions; pass local_dims"
    )


# -- pure states -------------------------------------------------------------

def concurrence_pure(state: StateVector, cut: BipartiteCut) -> float:
    cut.check(state.local_dims)
    # equals sqrt(2 (1 - tr rho_A^2)), evaluated without cancellation
    return pure_concurrence(state, cut.side_a)


def tangle_one_vs_rest(spec: WClassSpec, s: int) -> float:
    """C^2 of subsystem ``s`` against the rest: 4 alpha_s^2 (sum of the other alpha^2)."""
    if not 1 <= s <= spec.n:
        raise SpecError(f"subsystem s={s} out of range 1..{spec.n}")
    a2 = spec.alpha2
    return 4.0 * a2[s - 1] * (float(np.sum(a2)) - a2[s - 1])


# -- closed forms for W-class mixtures ---------------------------------------

def reduced_state(m: MixtureSpec, subsystems: Sequence[int]) -> np.ndarray:
    """Reduction of ``build_mixture(m)`` to the listed subsystems (1-based), in the listed order.

    Closed form: ``|x~><x~| + (1 - <x~|x~>) |0..0><0..0|`` with
    ``|x~> = sqrt(p) sum_{s in list, i} a_si |0..i..0>``.
    """
    subs = [int(s) for s in subsystems]
    if len(set(subs)) != len(subs):
        raise SpecError(f"repeated subsystem in {subs}")
    if not subs:
        raise SpecError("need at least one subsystem")
    for s in subs:
        if not 1 <= s <= m.n:
            raise SpecError(f"subsystem {s} out of range 1..{m.n}")
    d, l = m.d, len(subs)
    config.check_cap(d**l, "reduced state")
    x = np.zeros(d**l, dtype=complex)
    levels = np.arange(1, d)
    for pos, s in enumerate(subs):
        x[levels * d ** (l - 1 - pos)] = math.sqrt(m.p) * m.w.coeffs[s - 1]
    rho = np.outer(x, x.conj())
    a2 = m.w.alpha2
    rest = float(np.sum(a2)) - float(np.sum(a2[[s - 1 for s in subs]]))
    rho[0, 0] += m.p * rest + (1.0 - m.p)
    return rho


def reduced_pair_state(m: MixtureSpec, s: int, t: int) -> np.ndarray:
    if s == t:
        raise SpecError("pair needs two distinct subsystems")
    return reduced_state(m, [s, t])


def pair_concurrence_closed(m: MixtureSpec, s: int, t: int) -> tuple[float, float]:
    """(C, C^a) of the (s, t) reduction; both equal 2 p alpha_s alpha_t."""
    if s == t:
        raise SpecError("pair needs two distinct subsystems")
    for k in (s, t):
        if not 1 <= k <= m.n:
            raise SpecError(f"subsystem {k} out of range 1..{m.n}")
    a2 = m.w.alpha2
    c = 2.0 * m.p * math.sqrt(a2[s - 1] * a2[t - 1])
    return c, c


# -- HJW decompositions --------------------------------------------------------

def _rank2_spectrum(rho, rank_tol: float) -> tuple[np.ndarray, np.ndarray]:
    w, v = hermitian_eigh(rho)
    if w.size > 2 and w[2] >= rank_tol:
        raise RankError(f"density matrix has rank > 2 (third eigenvalue {w[2]:.3e})")
    top = np.clip(w[:2], 0.0, None)
    if top.size == 1:
        # 1x1 input: pad so callers always see two spanning vectors
        return np.vstack([math.sqrt(top[0]) * v[:, 0], np.zeros(1)]), top
    return (np.sqrt(top)[:, np.newaxis] * v[:, :2].T), top


def hjw_ensemble(
    rho,
    u,
    local_dims: Sequence[int] | None = None,
    rank_tol: float = config.RANK_TOL,
) -> DecompositionEnsemble:
    """Decomposition of a rank <= 2 state generated by the unitary ``u`` (r x r, r >= 2)."""
    rho = np.asarray(rho, dtype=complex)
    u = np.asarray(u, dtype=complex)
    if u.ndim != 2 or u.shape[0] != u.shape[1] or u.shape[0] < 2:
        raise WMonoError(f"u must be an r x r matrix with r >= 2, got shape {u.shape}")
    if not is_unitary(u):
        raise WMonoError("u is not unitary")
    dims = (rho.shape[0],) if local_dims is None else tuple(local_dims)
    basis, _ = _rank2_spectrum(rho, rank_tol)
    phis = u[:, :2] @ basis
    members = []
    for phi in phis:
        p = float(np.vdot(phi, phi).real)
        if p < config.PROB_FLOOR:
            continue
        members.append((p, StateVector(dims, phi / math.sqrt(p))))
    total = sum(p for p, _ in members)
    # renormalize away the dropped sub-floor weight
    return DecompositionEnsemble(tuple((p / total, phi) for p, phi in members))


def ensemble_average_concurrence(e: DecompositionEnsemble, cut: BipartiteCut) -> float:
    cut.check(e.local_dims)
    return sum(p * concurrence_pure(phi, cut) for p, phi in e.members)


@dataclass(frozen=True, eq=False)
class Rank2Basis:
    """Spanning pair of a rank-2 state, reordered so the cut's side A is the leading factor.

    ``average(u)`` evaluates the ensemble-average concurrence of the HJW
    decomposition generated by ``u`` through the active kernel backend,
    without materializing :class:`StateVector` objects.
    """

    vectors: np.ndarray
    dim_a: int
    dim_b: int

    def average(self, u) -> float:
        u2 = np.ascontiguousarray(np.asarray(u, dtype=complex)[:, :2])
        return kernels.ensemble_average(self.vectors, u2, self.dim_a, self.dim_b, config.PROB_FLOOR)


def rank2_basis(
    rho,
    cut: BipartiteCut,
    local_dims: Sequence[int] | None = None,
    rank_tol: float = config.RANK_TOL,
) -> Rank2Basis:
    rho = np.asarray(rho, dtype=complex)
    dims = _infer_dims(rho.shape[0], cut.n) if local_dims is None else tuple(local_dims)
    cut.check(dims)
    if math.prod(dims) != rho.shape[0]:
        raise DimensionMismatchError(f"local_dims {dims} do not match rho dimension {rho.shape[0]}")
    basis, _ = _rank2_spectrum(rho, rank_tol)
    order = list(cut.side_a) + list(cut.side_b)
    vecs = basis.reshape((2,) + dims).transpose([0] + [k + 1 for k in order]).reshape(2, -1)
    da = math.prod(dims[k] for k in cut.side_a)
    return Rank2Basis(np.ascontiguousarray(vecs), da, rho.shape[0] // da)


def _hermitian_from_params(theta: np.ndarray, r: int) -> np.ndarray:
    h = np.zeros((r, r), dtype=complex)
    h[np.diag_indices(r)] = theta[:r]
    iu = np.triu_indices(r, 1)
    k = len(iu[0])
    h[iu] = theta[r : r + k] + 1j * theta[r + k :]
    return h + np.triu(h, 1).conj().T


def _local_search(f, u0: np.ndarray, sign: float, step: float, min_step: float, max_evals: int) -> float:
    """Coordinate search on u = u0 exp(i H(theta)); minimizes sign * f."""
    r = u0.shape[0]
    theta = np.zeros(r * r)
    best = f(u0)
    evals = 1
    while step > min_step and evals < max_evals:
        improved = False
        for j in range(theta.size):
            for delta in (step, -step):
                theta[j] += delta
                val = f(u0 @ hermitian_expm(_hermitian_from_params(theta, r)))
                evals += 1
                if sign * val < sign * best:
                    best = val
                    improved = True
                    break
                theta[j] -= delta
        if not improved:
            step *= 0.5
    return best


def concurrence_minmax_numeric(
    rho,
    cut: BipartiteCut,
    budget: int = 64,
    seed: int = 0,
    local_dims: Sequence[int] | None = None,
    refine: bool = True,
    max_evals: int = 4000,
) -> tuple[float, float]:
    """Estimate (C, C^a) of a rank <= 2 state by sampling and refining HJW decompositions.

    Trial ``j`` uses decomposition size ``r = 2 + j % 3`` and a Haar unitary
    seeded with ``derive_seed(seed, "minmax", j)``. The best minimizing and
    maximizing unitaries are then refined by coordinate search. The minimum
    is an upper bound on the concurrence and the maximum a lower bound on
    the concurrence of assistance.
    """
    if budget < 1:
        raise WMonoError("budget must be >= 1")
    basis = rank2_basis(rho, cut, local_dims)
    lo = (math.inf, None)
    hi = (-math.inf, None)
    for j in range(budget):
        u = haar_unitary(2 + j % 3, derive_seed(seed, "minmax", j))
        val = basis.average(u)
        if val < lo[0]:
            lo = (val, u)
        if val > hi[0]:
            hi = (val, u)
    min_est, max_est = lo[0], hi[0]
    if refine:
        min_est = _local_search(basis.average, lo[1], 1.0, 0.25, 1e-7, max_evals)
        max_est = _local_search(basis.average, hi[1], -1.0, 0.25, 1e-7, max_evals)
    return min_est, max_est


# -- two-qubit oracle ------------------------------------------------------------

def wootters_2qubit(rho) -> float:
    """Two-qubit concurrence max(0, l1 - l2 - l3 - l4).

    The l_i (square roots of the eigenvalues of rho (Y x Y) rho* (Y x Y)) are
    obtained as singular values of W^T (Y x Y) W with rho = W W^dagger, which
    keeps rank-deficient inputs accurate.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise DimensionMismatchError(f"two-qubit density matrix must be 4x4, got {rho.shape}")
    w, v = hermitian_eigh(rho)
    wmat = v * np.sqrt(np.clip(w, 0.0, None))[np.newaxis, :]
    lam = np.linalg.svd(wmat.T @ _YY @ wmat, compute_uv=False)
    return max(0.0, float(lam[0] - lam[1] - lam[2] - lam[3]))
