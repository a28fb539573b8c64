import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wmono.entanglement import BipartiteCut, concurrence_pure, pair_concurrence_closed, rank2_basis
from wmono.errors import EmptyBlockError, PartitionError, PartitionGapError, PartitionOverlapError, SpecError
from wmono.linalg import haar_unitary, partial_trace
from wmono.monogamy import random_wclass
from wmono.partitions import (
    Partition,
    block_pair_concurrence,
    block_subsystems,
    coarse_grain,
    permute_partition,
    permute_spec,
    random_partition,
    validate_partition,
)
from wmono.states import MixtureSpec, build_mixture, build_wclass


class TestValidate:
    def test_seven_qubit_example(self):
        validate_partition(Partition(((1, 3), (2, 5, 6), (4, 7))), 7)

    def test_finest(self):
        validate_partition(Partition.finest(3), 3)

    def test_reordered_block_accepted(self):
        p = Partition(((3, 1), (2,)))
        validate_partition(p, 3)
        assert p.blocks == ((1, 3), (2,))

    def test_overlap(self):
        with pytest.raises(PartitionOverlapError, match="partition blocks overlap"):
            validate_partition(Partition(((1, 2), (2, 3))), 3)

    def test_gap(self):
        with pytest.raises(PartitionGapError):
            validate_partition(Partition(((1,), (3,))), 3)

    def test_empty(self):
        with pytest.raises(EmptyBlockError):
            validate_partition(Partition(((1, 2, 3), ())), 3)

    def test_out_of_range(self):
        with pytest.raises(PartitionError):
            validate_partition(Partition(((1, 2, 4),)), 3)

    def test_errors_are_distinct(self):
        kinds = {PartitionOverlapError, PartitionGapError, EmptyBlockError}
        assert len(kinds) == 3 and not any(issubclass(a, b) for a in kinds for b in kinds if a is not b)

    @pytest.mark.parametrize("obj", [{"a": 1}, [1, 2], [[1, "2"]], [[True]]])
    def test_json_rejects(self, obj):
        with pytest.raises(PartitionError):
            Partition.from_json(obj)

    def test_json_round_trip(self):
        p = Partition.from_json([[2, 1], [3]])
        assert p.to_json() == [[1, 2], [3]]
        assert str(p) == "{{1,2}, {3}}"

    def test_random_partition_valid(self):
        rng = np.random.default_rng(0)
        for n in range(1, 9):
            for _ in range(20):
                validate_partition(random_partition(n, rng), n)


class TestCoarseGrain:
    def test_w4_weights(self, w4):
        c = coarse_grain(w4, Partition(((1,), (2, 3), (4,))))
        np.testing.assert_allclose(c.block_weights, [0.25, 0.5, 0.25], atol=1e-15)
        assert c.effective_dim == 3

    def test_finest_is_identity(self):
        spec = random_wclass(4, 3, 2)
        c = coarse_grain(spec, Partition.finest(4))
        np.testing.assert_allclose(c.block_weights, spec.alpha2, atol=1e-15)
        np.testing.assert_allclose(np.abs(c.as_wclass().coeffs), np.abs(spec.coeffs), atol=1e-15)

    def test_coarsest(self, w3):
        c = coarse_grain(w3, Partition.coarsest(3))
        assert c.m == 1 and c.q(1) == pytest.approx(1.0)
        with pytest.raises(SpecError):
            c.as_wclass()

    def test_invalid_partition(self, w3):
        with pytest.raises(PartitionOverlapError):
            coarse_grain(w3, Partition(((1, 2), (2, 3))))

    def test_weight_conservation(self):
        rng = np.random.default_rng(5)
        for seed in range(50):
            n = int(rng.integers(2, 8))
            c = coarse_grain(random_wclass(n, 2 + seed % 3, seed), random_partition(n, rng))
            assert abs(float(np.sum(c.block_weights)) - 1.0) < 1e-12

    def test_block_states_orthonormal(self):
        spec = random_wclass(5, 4, 9)
        c = coarse_grain(spec, Partition(((1, 4), (2, 3, 5))))
        for s in (1, 2):
            vs = c.block_states(s)
            mat = np.array(list(vs.values()))
            np.testing.assert_allclose(mat.conj() @ mat.T, np.eye(len(vs)), atol=1e-10)
            assert np.all(mat[:, 0] == 0)  # orthogonal to the block vacuum

    def test_block_state_reconstructs_raw(self):
        spec = random_wclass(3, 3, 4)
        c = coarse_grain(spec, Partition(((1, 3), (2,))))
        # vacuum on block 2 times the block-1 excitation equals the projection of the raw vector
        psi = build_wclass(spec).amplitudes.reshape(3, 3, 3)
        proj = psi[:, 0, :].reshape(-1)
        recon = sum(math.sqrt(c.level_weights[0, i - 1]) * v for i, v in c.block_states(1).items())
        np.testing.assert_allclose(proj, recon, atol=1e-14)


class TestBlockPair:
    def test_w4_example(self, w4):
        part = Partition(((1,), (2, 3), (4,)))
        c = coarse_grain(w4, part)
        val, coa = block_pair_concurrence(c, 2, 1)
        assert val == pytest.approx(1 / math.sqrt(2), abs=1e-15) and coa == val
        # oracle: average concurrence of the raw reduction to qubits {2,3} and {1}
        rho = partial_trace(build_mixture(MixtureSpec(w4)), (2,) * 4, [0, 1, 2])
        rho = rho.reshape((2,) * 6).transpose(1, 2, 0, 4, 5, 3).reshape(8, 8)
        basis = rank2_basis(rho, BipartiteCut.of([0, 1], 3), (2, 2, 2))
        for j in range(10):
            assert basis.average(haar_unitary(2 + j % 3, j)) == pytest.approx(val, abs=1e-10)

    def test_zero_weight(self):
        from wmono.states import WClassSpec

        c = coarse_grain(WClassSpec.from_coeffs([1.0, 0.0, 1.0]), Partition(((1, 3), (2,))))
        assert block_pair_concurrence(c, 1, 2) == (0.0, 0.0)

    def test_finest_matches_pair_closed(self):
        spec = random_wclass(4, 2, 1)
        c = coarse_grain(spec, Partition.finest(4))
        m = MixtureSpec(spec, 0.4)
        for s, t in itertools.combinations(range(1, 5), 2):
            assert block_pair_concurrence(c, s, t, 0.4)[0] == pytest.approx(pair_concurrence_closed(m, s, t)[0])

    def test_same_block(self, w3):
        with pytest.raises(PartitionError):
            block_pair_concurrence(coarse_grain(w3, Partition.finest(3)), 1, 1)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.integers(2, 6), st.integers(2, 3))
def test_cut_consistency(seed, n, d):
    spec = random_wclass(n, d, seed)
    part = random_partition(n, np.random.default_rng(seed))
    c = coarse_grain(spec, part)
    psi = build_wclass(spec)
    for s in range(1, c.m + 1):
        if c.m == 1:
            break
        block = [j - 1 for j in part.block(s)]
        oracle = concurrence_pure(psi, BipartiteCut.of(block, n)) ** 2
        assert abs(4 * c.q(s) * (1 - c.q(s)) - oracle) < 1e-10


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.integers(2, 7), st.randoms(use_true_random=False))
def test_permutation_equivariance(seed, n, rnd):
    spec = random_wclass(n, 3, seed)
    part = random_partition(n, np.random.default_rng(seed + 1))
    perm = list(range(1, n + 1))
    rnd.shuffle(perm)
    a = coarse_grain(spec, part)
    b = coarse_grain(permute_spec(spec, perm), permute_partition(part, perm))
    np.testing.assert_array_equal(a.block_weights, b.block_weights)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.integers(3, 7), st.data())
def test_nested_merge(seed, n, data):
    spec = random_wclass(n, 2, seed)
    part = random_partition(n, np.random.default_rng(seed))
    if part.m < 2:
        return
    s, t = data.draw(st.lists(st.integers(1, part.m), min_size=2, max_size=2, unique=True))
    a = coarse_grain(spec, part)
    merged = coarse_grain(spec, part.merged(s, t))
    lo = min(s, t)
    assert merged.q(lo) == pytest.approx(a.q(s) + a.q(t), abs=1e-14)
    assert sorted(block_subsystems(part, [s, t])) == list(merged.partition.block(lo))
