#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-Python fallback.

Times the three hot paths on representative workloads: keyed Bernoulli
sweeps over implicit candidate sets, GF(p) sparse column rank of boundary
matrices, and Jacobi eigensolves of link Laplacians.

Usage: python benchmarks/bench_kernels.py [--quick]
"""

import argparse
import time

import numpy as np

from rsc._kernels import pure
from rsc.homology import PRIMARY_PRIME, boundary_matrix
from rsc.sampler import SampleSpec, sample
from rsc.spectra import link_graph, normalized_laplacian

try:
    from rsc._kernels import _fast as fast
except ImportError:
    fast = None


def timeit(fn, repeats):
    best = float("inf")
    result = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - t0)
    return best, result


def workloads(quick: bool):
    n_sweep = 120 if quick else 300
    n_rank = 80 if quick else 200
    m_eig = 60 if quick else 150

    verts = tuple(range(1, n_sweep + 1))
    yield (
        f"keyed sweep: C({n_sweep},2) pairs at p=0.3",
        lambda impl: impl.sample_implicit(7, 1, verts, 2, 0.3),
        lambda out: len(out),
    )
    verts3 = tuple(range(1, (40 if quick else 70) + 1))
    yield (
        f"keyed sweep: C({len(verts3)},3) triples at p=0.05",
        lambda impl: impl.sample_implicit(7, 2, verts3, 3, 0.05),
        lambda out: len(out),
    )

    Y = sample(SampleSpec(n=n_rank, r=3, alpha=(0.0, 0.0, 1.5, 0.0), seed=3))
    d1 = boundary_matrix(Y, 1)
    yield (
        f"rank mod p: edge boundary {d1.n_rows}x{d1.n_cols}",
        lambda impl: impl.rank_mod_p(d1.indptr, d1.rows, d1.vals, d1.n_rows, PRIMARY_PRIME),
        lambda out: out,
    )
    if Y.dim >= 2:
        d2 = boundary_matrix(Y, 2)
        yield (
            f"rank mod p: triangle boundary {d2.n_rows}x{d2.n_cols}",
            lambda impl: impl.rank_mod_p(
                d2.indptr, d2.rows, d2.vals, d2.n_rows, PRIMARY_PRIME
            ),
            lambda out: out,
        )

    G = sample(SampleSpec(n=m_eig + 1, r=2, p=(1, 0.4, 0.2), seed=5))
    lap, _, _ = normalized_laplacian(link_graph(G, (1,)))
    yield (
        f"jacobi eigenvalues: {lap.shape[0]}x{lap.shape[1]} link Laplacian",
        lambda impl: impl.jacobi_eigenvalues(lap),
        lambda out: round(float(out[-1]), 8),
    )


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--quick", action="store_true", help="smaller workloads")
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()

    if fast is None:
        print("compiled extension not built; run `pip install -e .` first")

    print(f"{'workload':55s} {'pure':>10s} {'compiled':>10s} {'speedup':>8s}")
    for name, call, digest in workloads(args.quick):
        t_pure, out_pure = timeit(lambda: call(pure), args.repeats)
        if fast is not None:
            t_fast, out_fast = timeit(lambda: call(fast), args.repeats)
            if digest(out_pure) != digest(out_fast):
                raise AssertionError(f"backends disagree on {name}")
            print(
                f"{name:55s} {t_pure:9.4f}s {t_fast:9.4f}s {t_pure / t_fast:7.1f}x"
            )
        else:
            print(f"{name:55s} {t_pure:9.4f}s {'-':>10s} {'-':>8s}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
