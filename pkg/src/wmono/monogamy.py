"""Monogamy saturation reports for W-class states and their mixtures with |0...0>.

For a focus block ``P_s`` of a partition, a report holds the tangle of
``P_s`` against the other blocks, the pairwise tangles ``C^2_{P_s P_k}``
and their CoA counterparts, and the two CKW-type residuals. Every value
is tagged with where it came from so a failing residual points at the
path that disagreed:

``closed-form``
    weight formulas (4 p^2 q_s (1 - q_s), 2 p sqrt(q_s q_k)).
``brute-force``
    partial traces and purities of realized state vectors.
``numeric-optimizer``
    min/max over sampled and refined HJW decompositions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import config
from .config import DEFAULT_TOLERANCES, Tolerances, derive_seed
from .entanglement import (
    BipartiteCut,
    DecompositionEnsemble,
    concurrence_minmax_numeric,
    concurrence_pure,
    ensemble_average_concurrence,
    hjw_ensemble,
    reduced_state,
)
from .errors import SpecError, WMonoError
from .linalg import StateVector, reduce_pure
from .partitions import (
    CoarseWClassSpec,
    Partition,
    block_pair_concurrence,
    block_subsystems,
    coarse_grain,
    random_partition,
)
from .states import MixtureSpec, WClassSpec, build_mixture, build_wclass, purify_mixture

CLOSED = "closed-form"
BRUTE = "brute-force"
NUMERIC = "numeric-optimizer"

MODES = ("closed", "numeric")


@dataclass(frozen=True)
class PairTerm:
    k: int
    c: float
    coa: float
    provenance: str = CLOSED

    @property
    def c2(self) -> float:
        return self.c * self.c

    @property
    def coa2(self) -> float:
        return self.coa * self.coa


@dataclass(frozen=True)
class Check:
    """An independent recomputation of a report value."""

    name: str
    value: float
    reference: float
    tol: float
    provenance: str

    @property
    def residual(self) -> float:
        return abs(self.value - self.reference)

    @property
    def ok(self) -> bool:
        return self.residual < self.tol


@dataclass(frozen=True)
class MonogamyReport:
    focus: int
    lhs: float
    pairs: tuple[PairTerm, ...]
    mode: str
    tolerances: Tolerances
    checks: tuple[Check, ...] = ()
    provenance: dict = field(default_factory=dict)

    @property
    def rhs_pair_tangles(self) -> list[float]:
        return [t.c2 for t in self.pairs]

    @property
    def rhs_coa_tangles(self) -> list[float]:
        return [t.coa2 for t in self.pairs]

    @property
    def residual_ckw(self) -> float:
        return abs(self.lhs - math.fsum(self.rhs_pair_tangles))

    @property
    def residual_dual(self) -> float:
        return abs(self.lhs - math.fsum(self.rhs_coa_tangles))

    @property
    def per_pair_c_equals_coa(self) -> list[float]:
        return [abs(t.c - t.coa) for t in self.pairs]

    @property
    def failures(self) -> list[str]:
        tol = self.tolerances.algebraic
        bad = []
        if not self.residual_ckw < tol:
            bad.append("residual_ckw")
        if not self.residual_dual < tol:
            bad.append("residual_dual")
        for t, r in zip(self.pairs, self.per_pair_c_equals_coa):
            if not r < tol:
                bad.append(f"c_equals_coa[{t.k}]")
        bad.extend(c.name for c in self.checks if not c.ok)
        return bad

    @property
    def passed(self) -> bool:
        return not self.failures

    @property
    def max_check_residual(self) -> float:
        return max((c.residual for c in self.checks), default=0.0)

    def to_json(self) -> dict:
        return {
            "focus": self.focus,
            "lhs": self.lhs,
            "pairs": [{"k": t.k, "c2": t.c2, "coa2": t.coa2} for t in self.pairs],
            "residual_ckw": self.residual_ckw,
            "residual_dual": self.residual_dual,
            "per_pair_c_equals_coa": self.per_pair_c_equals_coa,
            "mode": self.mode,
            "tolerances": self.tolerances.as_dict(),
            "provenance": dict(self.provenance),
            "checks": [
                {
                    "name": c.name,
                    "value": c.value,
                    "reference": c.reference,
                    "residual": c.residual,
                    "tol": c.tol,
                    "provenance": c.provenance,
                }
                for c in self.checks
            ],
            "passed": self.passed,
        }


def theorem1_closed_tangle(m: MixtureSpec, c: CoarseWClassSpec, s: int) -> float:
    """Squared concurrence of block s against the other blocks: 4 p^2 q_s (1 - q_s)."""
    if not 1 <= s <= c.m:
        raise WMonoError(f"block {s} out of range 1..{c.m}")
    q = c.block_weights
    qs = q[s - 1]
    return float(4.0 * m.p * m.p * qs * (float(np.sum(q)) - qs))


def _purified_partition(p: Partition, n: int) -> Partition:
    return Partition(p.blocks + ((n + 1,),))


def _lhs_via_purification(m: MixtureSpec, partition: Partition, s: int) -> float:
    """Weight closed forms on the purification, minus the ancilla pair term."""
    pur = purify_mixture(m)
    cg = coarse_grain(pur, _purified_partition(partition, m.n))
    q = cg.block_weights
    qs = q[s - 1]
    total = 4.0 * qs * (float(np.sum(q)) - qs)
    anc_pair = block_pair_concurrence(cg, s, cg.m)[0]
    return total - anc_pair**2


def _spectral_ensemble(rho, dims) -> DecompositionEnsemble:
    return hjw_ensemble(rho, np.eye(2), dims)


def _lhs_bruteforce(m: MixtureSpec, partition: Partition, s: int) -> float:
    """Purities of the realized purification.

    C^2(P_s | rest, ancilla) of the pure (n+1)-qudit vector, minus the mixed
    P_s-ancilla tangle evaluated on the spectral decomposition of their
    reduced state. With p = 1 the ancilla is unentangled and the raw vector
    is used directly.
    """
    block = [j - 1 for j in partition.block(s)]
    if m.p == 1.0:
        if len(block) == m.n:
            return 0.0
        psi = build_wclass(m.w)
        return concurrence_pure(psi, BipartiteCut.of(block, m.n)) ** 2
    psi = build_wclass(purify_mixture(m))
    whole = concurrence_pure(psi, BipartiteCut.of(block, m.n + 1)) ** 2
    rho = reduce_pure(psi, block + [m.n])
    dims = (m.d,) * (len(block) + 1)
    pair = ensemble_average_concurrence(
        _spectral_ensemble(rho, dims), BipartiteCut.of(range(len(block)), len(block) + 1)
    )
    return whole - pair**2


def build_report(
    m: MixtureSpec,
    p: Partition,
    s: int,
    mode: str = "closed",
    budget: int = 16,
    seed: int = 0,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
    bruteforce: bool = True,
) -> MonogamyReport:
    """Saturation report for focus block ``s`` (1-based) of partition ``p``.

    ``closed`` mode fills lhs and pair terms from the weight formulas and
    cross-checks lhs through the purification, both algebraically and (if
    ``bruteforce``) on the realized vector. ``numeric`` mode also estimates
    lhs and every pair's C and C^a with the decomposition optimizer.
    """
    if mode not in MODES:
        raise WMonoError(f"mode must be one of {MODES}, got {mode!r}")
    c = coarse_grain(m.w, p)
    if not 1 <= s <= c.m:
        raise WMonoError(f"focus block {s} out of range 1..{c.m}")
    lhs = theorem1_closed_tangle(m, c, s)
    pairs = []
    for k in range(1, c.m + 1):
        if k == s:
            continue
        cval, coa = block_pair_concurrence(c, s, k, m.p)
        pairs.append(PairTerm(k, cval, coa, CLOSED))
    provenance = {"lhs": CLOSED, "pairs": CLOSED, "coa": CLOSED}
    tol_a, tol_o = tolerances.algebraic, tolerances.optimizer

    checks = [Check("lhs_purification", _lhs_via_purification(m, p, s), lhs, tol_a, CLOSED)]
    if bruteforce:
        checks.append(Check("lhs_bruteforce", _lhs_bruteforce(m, p, s), lhs, tol_a, BRUTE))

    if mode == "numeric" and c.m > 1:
        provenance["coa"] = f"{CLOSED}; checked by {NUMERIC}"
        focus = [j - 1 for j in p.block(s)]
        rho = build_mixture(m)
        lo, _ = concurrence_minmax_numeric(
            rho, BipartiteCut.of(focus, m.n), budget, derive_seed(seed, "report", s, "lhs"),
            local_dims=m.w.local_dims,
        )
        checks.append(Check("lhs_numeric_min", lo * lo, lhs, tol_o, NUMERIC))
        for t in pairs:
            subs = block_subsystems(p, [s, t.k])
            ns = len(p.block(s))
            rho_pair = reduced_state(m, subs)
            lo, hi = concurrence_minmax_numeric(
                rho_pair,
                BipartiteCut.of(range(ns), len(subs)),
                budget,
                derive_seed(seed, "report", s, "pair", t.k),
                local_dims=(m.d,) * len(subs),
            )
            checks.append(Check(f"pair{t.k}_numeric_min", lo, t.c, tol_o, NUMERIC))
            checks.append(Check(f"pair{t.k}_numeric_max", hi, t.coa, tol_o, NUMERIC))
            checks.append(Check(f"pair{t.k}_numeric_spread", hi - lo, 0.0, tolerances.spread, NUMERIC))
    return MonogamyReport(s, lhs, tuple(pairs), mode, tolerances, tuple(checks), provenance)


def build_reports(
    m: MixtureSpec,
    p: Partition,
    foci: Iterable[int] | None = None,
    **kwargs,
) -> list[MonogamyReport]:
    foci = range(1, p.m + 1) if foci is None else foci
    return [build_report(m, p, s, **kwargs) for s in foci]


def random_wclass(n: int, d: int, seed: int) -> WClassSpec:
    """Complex-Gaussian coefficients, normalized; deterministic per seed."""
    if n < 2 or d < 2:
        raise SpecError(f"need n >= 2 and d >= 2, got n={n}, d={d}")
    config.check_cap(d**n, f"{n}-qudit state (d={d})")
    rng = np.random.default_rng(seed)
    while True:
        z = rng.standard_normal((n, d - 1)) + 1j * rng.standard_normal((n, d - 1))
        if np.any(z != 0):
            return WClassSpec.from_coeffs(z, d)


# -- batch sweeps and CSV flattening ----------------------------------------------

CSV_FIELDS = (
    "n",
    "d",
    "p",
    "seed",
    "partition",
    "focus",
    "lhs",
    "sum_c2",
    "sum_coa2",
    "residual_ckw",
    "residual_dual",
    "max_c_coa_residual",
    "max_check_residual",
    "passed",
)


def report_row(instance: dict, r: MonogamyReport) -> dict:
    return {
        **instance,
        "focus": r.focus,
        "lhs": r.lhs,
        "sum_c2": math.fsum(r.rhs_pair_tangles),
        "sum_coa2": math.fsum(r.rhs_coa_tangles),
        "residual_ckw": r.residual_ckw,
        "residual_dual": r.residual_dual,
        "max_c_coa_residual": max(r.per_pair_c_equals_coa, default=0.0),
        "max_check_residual": r.max_check_residual,
        "passed": r.passed,
    }


def sweep_rows(
    n_values: Sequence[int],
    d_values: Sequence[int],
    p_values: Sequence[float],
    trials: int,
    master_seed: int,
    mode: str = "closed",
    budget: int = 16,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> list[dict]:
    """One row per (n, d, p, trial seed, focus), sorted by those keys.

    Trial ``j`` of configuration (n, d, p) draws its spec with
    ``derive_seed(master_seed, "sweep", n, d, j)`` and its partition from the
    same seed's ``"partition"`` child, so the spec is shared across p values.
    """
    if not p_values:
        raise WMonoError("p-list must be non-empty")
    if trials < 1:
        raise WMonoError("trials must be >= 1")
    rows = []
    for n in n_values:
        for d in d_values:
            config.check_cap(d ** (n + 1), f"{n + 1}-qudit purification (d={d})")
            for j in range(trials):
                tseed = derive_seed(master_seed, "sweep", n, d, j)
                w = random_wclass(n, d, tseed)
                part = random_partition(n, np.random.default_rng(derive_seed(tseed, "partition")))
                for pv in p_values:
                    mix = MixtureSpec(w, pv)
                    inst = {"n": n, "d": d, "p": float(pv), "seed": tseed, "partition": str(part)}
                    for r in build_reports(
                        mix, part, mode=mode, budget=budget, seed=tseed, tolerances=tolerances
                    ):
                        rows.append(report_row(inst, r))
    rows.sort(key=lambda row: (row["n"], row["d"], row["p"], row["seed"], row["focus"]))
    return rows
