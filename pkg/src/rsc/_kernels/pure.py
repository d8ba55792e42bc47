"""Pure-Python kernels: keyed hashing, GF(p) column rank, Jacobi eigenvalues.

This module is the reference implementation of the kernel API.  The compiled
twin (``rsc._kernels._fast``) must produce bit-identical hash decisions and
identical ranks; eigenvalues agree to solver tolerance.
"""

from __future__ import annotations

from itertools import combinations

import numpy as np

BACKEND = "pure"

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB
_INV53 = 2.0 ** -53


def _mix(z: int) -> int:
    # splitmix64 finalizer
    z &= _MASK64
    z = ((z ^ (z >> 30)) * _MIX1) & _MASK64
    z = ((z ^ (z >> 27)) * _MIX2) & _MASK64
    return z ^ (z >> 31)


def _level_key(seed: int, dim: int) -> int:
    h = _mix(seed ^ _GOLDEN)
    return _mix(h ^ (((dim + 1) * _MIX1) & _MASK64))


def keyed_u01(seed: int, dim: int, verts) -> float:
    """Uniform in [0, 1) keyed by (seed, dimension, vertex tuple).

    Order-independent across candidates: the draw for a simplex depends only
    on its identity, so raising an inclusion probability can only add faces.
    """
    h = _level_key(seed, dim)
    for v in verts:
        h = _mix(h ^ ((v * _MIX2) & _MASK64))
    return (h >> 11) * _INV53


def stream_u01(seed: int, dim: int, index: int) -> float:
    """Counter-based uniform stream, one lane per (seed, dimension)."""
    h = _level_key(seed, dim)
    return (_mix(h ^ (((index + 1) * _GOLDEN) & _MASK64)) >> 11) * _INV53


def derive_seed(master: int, index: int) -> int:
    """Injective 64-bit per-trial seed derivation."""
    return _mix(_mix(master ^ _GOLDEN) ^ (((index + 1) * _MIX2) & _MASK64))


def sample_implicit(seed: int, dim: int, verts, k: int, p: float) -> list:
    """Keyed Bernoulli sweep over all k-subsets of ``verts`` in lex order.

    Returns the retained subsets as tuples.  ``verts`` must be sorted.
    """
    prefix = _level_key(seed, dim)
    kept = []
    for combo in combinations(verts, k):
        h = prefix
        for v in combo:
            h = _mix(h ^ ((int(v) * _MIX2) & _MASK64))
        if (h >> 11) * _INV53 < p:
            kept.append(tuple(int(v) for v in combo))
    return kept


def rank_mod_p(indptr, rows, vals, nrows: int, prime: int) -> int:
    """Rank over GF(prime) of a sparse matrix given in CSC form.

    Columns are reduced against previously found pivots by lowest-nonzero
    row index; the number of surviving pivot columns is the rank.
    """
    indptr = list(indptr)
    ncols = len(indptr) - 1
    pivots: dict[int, dict[int, int]] = {}
    rank = 0
    for j in range(ncols):
        col: dict[int, int] = {}
        for t in range(indptr[j], indptr[j + 1]):
            v = int(vals[t]) % prime
            if v:
                col[int(rows[t])] = v
        while col:
            low = max(col)
            piv = pivots.get(low)
            if piv is None:
                pivots[low] = col
                rank += 1
                break
            scale = (col[low] * pow(piv[low], prime - 2, prime)) % prime
            for row, pv in piv.items():
                nv = (col.get(row, 0) - scale * pv) % prime
                if nv:
                    col[row] = nv
                else:
                    col.pop(row, None)
    return rank


def jacobi_eigenvalues(a, tol: float = 1e-10, max_sweeps: int = 60):
    """Eigenvalues of a dense symmetric matrix by cyclic Jacobi rotations.

    Sweeps until every off-diagonal entry is at most ``tol`` in absolute
    value.  Returns eigenvalues in ascending order.
    """
    a = np.array(a, dtype=np.float64, copy=True)
    m = a.shape[0]
    if a.shape != (m, m):
        raise ValueError("matrix must be square")
    if m <= 1:
        return np.diagonal(a).copy()
    for _ in range(max_sweeps):
        off = np.max(np.abs(a - np.diag(np.diagonal(a))))
        if off <= tol:
            break
        for p in range(m - 1):
            for q in range(p + 1, m):
                apq = a[p, q]
                if abs(apq) <= tol * 1e-2:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                if abs(theta) > 1e12:
                    t = 1.0 / (2.0 * theta)
                else:
                    t = (1.0 if theta >= 0 else -1.0) / (
                        abs(theta) + np.sqrt(theta * theta + 1.0)
                    )
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                rp = a[p, :].copy()
                rq = a[q, :].copy()
                a[p, :] = c * rp - s * rq
                a[q, :] = s * rp + c * rq
                cp = a[:, p].copy()
                cq = a[:, q].copy()
                a[:, p] = c * cp - s * cq
                a[:, q] = s * cp + c * cq
                a[p, q] = 0.0
                a[q, p] = 0.0
    return np.sort(np.diagonal(a).copy())
