"""Compiled vs numpy kernels on the shapes the verification suites hit.

Run ``python3 benchmarks/bench_kernels.py [--repeat N]``. Prints one line
per case with the best-of-N time per call for each backend and the speedup.
"""

import argparse
import timeit

import numpy as np

from wmono import _pykernels
from wmono.entanglement import BipartiteCut, rank2_basis, reduced_pair_state
from wmono.linalg import haar_unitary
from wmono.monogamy import random_wclass
from wmono.states import MixtureSpec, build_mixture

try:
    from wmono import _ckernels
except ImportError:  # extension not built
    _ckernels = None


def cases():
    rng = np.random.default_rng(0)
    for da, db in [(2, 2), (3, 3), (4, 8), (8, 16)]:
        psi = rng.standard_normal(da * db) + 1j * rng.standard_normal(da * db)
        yield f"weighted_concurrence {da}x{db}", "weighted_concurrence", (psi, da, db)
    for n, d, p in [(3, 2, 1.0), (3, 3, 0.5), (5, 2, 0.5)]:
        m = MixtureSpec(random_wclass(n, d, 1), p)
        if n == 3:
            rho, cut, dims = reduced_pair_state(m, 1, 2), BipartiteCut.of([0], 2), (d, d)
        else:
            rho, cut, dims = build_mixture(m), BipartiteCut.of([0, 1], n), m.w.local_dims
        b = rank2_basis(rho, cut, dims)
        u = haar_unitary(4, 2)[:, :2]
        yield (
            f"ensemble_average n={n} d={d} cut {b.dim_a}x{b.dim_b} r=4",
            "ensemble_average",
            (b.vectors, np.ascontiguousarray(u), b.dim_a, b.dim_b, 1e-14),
        )


def best(fn, args, repeat, number):
    return min(timeit.repeat(lambda: fn(*args), repeat=repeat, number=number)) / number


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--number", type=int, default=2000)
    args = ap.parse_args()
    print(f"{'case':48s} {'numpy us':>10s} {'cython us':>10s} {'speedup':>8s}")
    for label, name, call_args in cases():
        t_py = best(getattr(_pykernels, name), call_args, args.repeat, args.number)
        if _ckernels is None:
            print(f"{label:48s} {t_py * 1e6:10.2f} {'n/a':>10s} {'':>8s}")
            continue
        fn_c = getattr(_ckernels, name)
        assert abs(fn_c(*call_args) - getattr(_pykernels, name)(*call_args)) < 1e-12
        t_c = best(fn_c, call_args, args.repeat, args.number)
        print(f"{label:48s} {t_py * 1e6:10.2f} {t_c * 1e6:10.2f} {t_py / t_c:7.1f}x")


if __name__ == "__main__":
    main()
