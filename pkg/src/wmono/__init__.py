"""Generalized W-class states and their monogamy relations.

Constructs n-qudit W-class states, their mixtures with ``|0...0>`` and
purifications, computes concurrence and concurrence of assistance in closed
form and by brute force, and checks that CKW-type monogamy relations are
saturated for arbitrary partitions of the subsystems.
"""

from .config import Tolerances, derive_seed
from .entanglement import (
    BipartiteCut,
    DecompositionEnsemble,
    concurrence_minmax_numeric,
    concurrence_pure,
    ensemble_average_concurrence,
    hjw_ensemble,
    pair_concurrence_closed,
    reduced_pair_state,
    reduced_state,
    tangle_one_vs_rest,
    wootters_2qubit,
)
from .kernels import BACKEND
from .linalg import (
    StateVector,
    SubsystemIndexSet,
    haar_unitary,
    hermitian_eigenvalues,
    kron,
    partial_trace,
    purity,
)
from .monogamy import MonogamyReport, build_report, random_wclass, theorem1_closed_tangle
from .partitions import CoarseWClassSpec, Partition, block_pair_concurrence, coarse_grain, validate_partition
from .states import (
    MixtureSpec,
    WClassSpec,
    build_mixture,
    build_wclass,
    excitation_index,
    mixture_from_json,
    purify_mixture,
)

__version__ = "0.1.0"
