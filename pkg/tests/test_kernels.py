"""Backend equivalence: the compiled kernels must match the pure ones."""

import numpy as np
import pytest

from rsc._kernels import pure

fast = pytest.importorskip(
    "rsc._kernels._fast", reason="compiled kernel extension not built"
)

BACKENDS = (pure, fast)


def test_backend_names():
    assert pure.BACKEND == "pure"
    assert fast.BACKEND == "compiled"


def test_keyed_u01_bit_identical():
    rng = np.random.default_rng(0)
    for _ in range(500):
        seed = int(rng.integers(0, 2**63))
        dim = int(rng.integers(0, 6))
        verts = tuple(sorted(rng.choice(10_000, size=rng.integers(1, 6), replace=False) + 1))
        verts = tuple(int(v) for v in verts)
        assert fast.keyed_u01(seed, dim, verts) == pure.keyed_u01(seed, dim, verts)


def test_stream_and_seed_derivation_identical():
    for seed in (0, 1, 12345, 2**62 + 17):
        for idx in (0, 1, 7, 10**6):
            assert fast.stream_u01(seed, 2, idx) == pure.stream_u01(seed, 2, idx)
            assert fast.derive_seed(seed, idx) == pure.derive_seed(seed, idx)


def test_derived_seeds_collision_free():
    seen = set()
    for i in range(10_000):
        s = pure.derive_seed(987654321, i)
        assert s not in seen
        seen.add(s)


def test_keyed_u01_uniform_mean():
    values = [pure.keyed_u01(7, 1, (i, i + 3)) for i in range(20_000)]
    assert abs(np.mean(values) - 0.5) < 0.01
    assert 0.0 <= min(values) and max(values) < 1.0


def test_sample_implicit_identical():
    verts = tuple(range(1, 25))
    for k in (1, 2, 3):
        for p in (0.0, 0.05, 0.3, 0.9, 1.0):
            a = fast.sample_implicit(99, k - 1, verts, k, p)
            b = pure.sample_implicit(99, k - 1, verts, k, p)
            assert a == b


def _random_csc(rng, nrows, ncols, fill):
    cols = []
    for _ in range(ncols):
        size = int(rng.integers(1, fill + 1))
        rows = np.sort(rng.choice(nrows, size=min(size, nrows), replace=False))
        vals = rng.choice([-2, -1, 1, 2, 3], size=len(rows))
        cols.append((rows.astype(np.int32), vals.astype(np.int64)))
    indptr = np.zeros(ncols + 1, dtype=np.int64)
    all_rows = []
    all_vals = []
    for c, (rows, vals) in enumerate(cols):
        all_rows.extend(rows)
        all_vals.extend(vals)
        indptr[c + 1] = len(all_rows)
    return indptr, np.array(all_rows, dtype=np.int32), np.array(all_vals, dtype=np.int64)


def test_rank_mod_p_matches_numpy():
    rng = np.random.default_rng(42)
    prime = 2_147_483_647
    for _ in range(40):
        nrows = int(rng.integers(1, 20))
        ncols = int(rng.integers(1, 20))
        indptr, rows, vals = _random_csc(rng, nrows, ncols, 4)
        dense = np.zeros((nrows, ncols))
        for c in range(ncols):
            for t in range(indptr[c], indptr[c + 1]):
                dense[rows[t], c] = vals[t]
        expected = np.linalg.matrix_rank(dense)
        got_fast = fast.rank_mod_p(indptr, rows, vals, nrows, prime)
        got_pure = pure.rank_mod_p(indptr, rows, vals, nrows, prime)
        assert got_fast == got_pure == expected


def test_rank_zero_matrix():
    indptr = np.array([0, 0, 0], dtype=np.int64)
    empty_rows = np.array([], dtype=np.int32)
    empty_vals = np.array([], dtype=np.int64)
    for impl in BACKENDS:
        assert impl.rank_mod_p(indptr, empty_rows, empty_vals, 5, 101) == 0


def test_jacobi_matches_numpy():
    rng = np.random.default_rng(3)
    for m in (1, 2, 3, 8, 25, 60):
        a = rng.normal(size=(m, m))
        a = (a + a.T) / 2
        expected = np.linalg.eigvalsh(a)
        for impl in BACKENDS:
            got = impl.jacobi_eigenvalues(a)
            assert np.allclose(got, expected, atol=1e-8)


def test_jacobi_backends_close():
    rng = np.random.default_rng(9)
    a = rng.normal(size=(30, 30))
    a = (a + a.T) / 2
    assert np.allclose(
        fast.jacobi_eigenvalues(a), pure.jacobi_eigenvalues(a), atol=1e-10
    )


def test_jacobi_rejects_non_square():
    for impl in BACKENDS:
        with pytest.raises(ValueError):
            impl.jacobi_eigenvalues(np.zeros((2, 3)))


def test_pure_env_override(monkeypatch):
    import importlib

    import rsc._kernels as kernels

    monkeypatch.setenv("RSC_PURE", "1")
    importlib.reload(kernels)
    assert kernels.backend() == "pure"
    monkeypatch.delenv("RSC_PURE")
    importlib.reload(kernels)
    assert kernels.backend() == "compiled"
