"""Partitions of the subsystems and coarse-graining of W-class specs onto blocks.

Grouping the subsystems of a W-class state into blocks ``P_1..P_m`` gives
again a W-class state, now m-partite, once each block's excitation vectors
are renamed as block-level basis states. All closed forms need only the
block weights

    q_si = sum_{j in P_s} |a_ji|^2,    q_s = sum_i q_si,

which are squared-norm weights (probabilities), with amplitudes sqrt(q_si).
Subsystem labels in partitions are 1-based; block indices are 1-based.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Iterable, Sequence

import numpy as np

from .errors import EmptyBlockError, PartitionError, PartitionGapError, PartitionOverlapError, SpecError
from .states import WClassSpec


@dataclass(frozen=True)
class Partition:
    """Ordered blocks of 1-based subsystem labels. Order inside a block is not significant."""

    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "blocks", tuple(tuple(sorted(int(j) for j in b)) for b in self.blocks))

    @classmethod
    def finest(cls, n: int) -> "Partition":
        return cls(tuple((s,) for s in range(1, n + 1)))

    @classmethod
    def coarsest(cls, n: int) -> "Partition":
        return cls((tuple(range(1, n + 1)),))

    @classmethod
    def from_json(cls, obj: Any) -> "Partition":
        if not isinstance(obj, list) or not all(isinstance(b, list) for b in obj):
            raise PartitionError("partition must be a list of lists of subsystem indices")
        for b in obj:
            for j in b:
                if isinstance(j, bool) or not isinstance(j, int):
                    raise PartitionError(f"partition entries must be integers, got {j!r}")
        return cls(tuple(tuple(b) for b in obj))

    def to_json(self) -> list[list[int]]:
        return [list(b) for b in self.blocks]

    @property
    def m(self) -> int:
        return len(self.blocks)

    def block(self, s: int) -> tuple[int, ...]:
        if not 1 <= s <= self.m:
            raise PartitionError(f"block {s} out of range 1..{self.m}")
        return self.blocks[s - 1]

    def merged(self, s: int, t: int) -> "Partition":
        """Blocks s and t joined, placed at the position of the first of the two."""
        if s == t:
            raise PartitionError("cannot merge a block with itself")
        lo, hi = sorted((s, t))
        joined = self.block(lo) + self.block(hi)
        rest = [b for k, b in enumerate(self.blocks, 1) if k not in (lo, hi)]
        rest.insert(lo - 1, joined)
        return Partition(tuple(rest))

    def __str__(self):
        return "{" + ", ".join("{" + ",".join(map(str, b)) + "}" for b in self.blocks) + "}"


def validate_partition(p: Partition, n: int) -> None:
    """Raise a specific :class:`PartitionError` unless ``p`` is a disjoint cover of 1..n."""
    seen: dict[int, int] = {}
    for k, b in enumerate(p.blocks, 1):
        if not b:
            raise EmptyBlockError(f"partition block {k} is empty")
        for j in b:
            if not 1 <= j <= n:
                raise PartitionError(f"subsystem {j} in block {k} is out of range 1..{n}")
            if j in seen:
                raise PartitionOverlapError(
                    f"partition blocks overlap: subsystem {j} is in blocks {seen[j]} and {k}"
                )
            seen[j] = k
    missing = sorted(set(range(1, n + 1)) - set(seen))
    if missing:
        raise PartitionGapError(f"partition leaves subsystems uncovered: {missing}")


def random_partition(n: int, rng: np.random.Generator) -> Partition:
    """Uniformly random block count, then a random ordered split of a random permutation."""
    m = int(rng.integers(1, n + 1))
    perm = rng.permutation(np.arange(1, n + 1))
    cuts = np.sort(rng.choice(np.arange(1, n), size=m - 1, replace=False)) if m > 1 else []
    pieces = np.split(perm, cuts)
    return Partition(tuple(tuple(int(j) for j in piece) for piece in pieces))


@dataclass(frozen=True, eq=False)
class CoarseWClassSpec:
    """Block-level view of a W-class spec.

    Stores the weights and a reference to the raw spec; the renamed block
    basis is never materialized except on request by :meth:`block_states`.
    """

    raw: WClassSpec
    partition: Partition
    level_weights: np.ndarray  # (m, d-1), q_si
    block_weights: np.ndarray  # (m,), q_s

    @property
    def m(self) -> int:
        return self.partition.m

    @property
    def d(self) -> int:
        return self.raw.d

    @property
    def effective_dim(self) -> int:
        """Dimension of a block's vacuum-plus-single-excitation subspace, maximized over blocks."""
        return 1 + (self.d - 1) * max(len(b) for b in self.partition.blocks)

    def q(self, s: int) -> float:
        return float(self.block_weights[s - 1])

    def as_wclass(self) -> WClassSpec:
        """The m-partite W-class spec with amplitude sqrt(q_si) on block s, level i."""
        if self.m < 2:
            raise SpecError("a single block is not a multipartite W-class state")
        return WClassSpec(self.m, self.d, np.sqrt(self.level_weights))

    def block_states(self, s: int) -> dict[int, np.ndarray]:
        """Normalized excitation vectors |x_si> of block s on its own d^{n_s} space, keyed by level.

        Levels with zero weight have no defined vector and are omitted.
        """
        members = self.partition.block(s)
        d, ns = self.d, len(members)
        out = {}
        for i in range(1, d):
            v = np.zeros(d**ns, dtype=complex)
            for pos, j in enumerate(members):
                v[i * d ** (ns - 1 - pos)] = self.raw.coeffs[j - 1, i - 1]
            q = self.level_weights[s - 1, i - 1]
            if q > 0.0:
                out[i] = v / math.sqrt(q)
        return out


def coarse_grain(spec: WClassSpec, p: Partition) -> CoarseWClassSpec:
    validate_partition(p, spec.n)
    if not spec.normalized:
        raise SpecError("coarse-graining requires a normalized spec")
    mod2 = np.abs(spec.coeffs) ** 2
    # exactly rounded sums, so relabelling subsystems cannot change a single bit
    level = np.array(
        [[math.fsum(mod2[j - 1, i] for j in b) for i in range(spec.d - 1)] for b in p.blocks]
    )
    level.setflags(write=False)
    block = np.array([math.fsum(row) for row in level])
    block.setflags(write=False)
    return CoarseWClassSpec(spec, p, level, block)


def block_pair_concurrence(c: CoarseWClassSpec, s: int, t: int, p: float = 1.0) -> tuple[float, float]:
    """(C, C^a) between blocks s and t of a W-class mixture with weight p; both 2 p sqrt(q_s q_t)."""
    if s == t:
        raise PartitionError("block pair needs two distinct blocks")
    val = 2.0 * p * math.sqrt(c.q(s) * c.q(t))
    return val, val


def permute_spec(spec: WClassSpec, perm: Sequence[int]) -> WClassSpec:
    """Relabel subsystems: new subsystem k+1 carries the coefficients of old subsystem perm[k] (1-based)."""
    idx = [int(j) - 1 for j in perm]
    if sorted(idx) != list(range(spec.n)):
        raise SpecError(f"{list(perm)} is not a permutation of 1..{spec.n}")
    return WClassSpec(spec.n, spec.d, spec.coeffs[idx], spec.original_total)


def permute_partition(p: Partition, perm: Sequence[int]) -> Partition:
    """The partition matching :func:`permute_spec` with the same ``perm``."""
    new_label = {int(old): k + 1 for k, old in enumerate(perm)}
    return Partition(tuple(tuple(new_label[j] for j in b) for b in p.blocks))


def block_subsystems(p: Partition, blocks: Iterable[int]) -> list[int]:
    """1-based subsystem labels of the selected blocks, in block order."""
    out: list[int] = []
    for s in blocks:
        out.extend(p.block(s))
    return out
