"""Boundary matrices and Betti numbers over the rationals.

Ranks default to sparse column reduction over GF(p) with a fixed 31-bit
prime, cross-checked against a second prime chosen deterministically from a
table (so experiment outputs stay byte-reproducible); a disagreement
escalates to a third prime and exact rational elimination.  A mod-p rank
can only undershoot the rational rank, and only for finitely many primes,
so dual-prime agreement leaves silent errors vanishingly unlikely.

Every ``betti`` call verifies the Euler identity, the strong Morse
inequalities and agreement of b_0 with union-find; a violation raises
``InternalConsistencyError`` because it can only mean a rank bug.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import _kernels as kernels
from .model import SimplicialComplex

__all__ = [
    "PRIMARY_PRIME",
    "EXACT_COLUMN_LIMIT",
    "InternalConsistencyError",
    "UnionFind",
    "BoundaryMatrix",
    "boundary_matrix",
    "rank",
    "rank_mod",
    "rank_exact",
    "kernel_basis_mod_p",
    "reduce_against",
    "BettiVector",
    "betti",
    "connected_components",
    "morse_check",
]

PRIMARY_PRIME = 2_147_483_647
SECONDARY_PRIMES = (
    2_147_483_629,
    2_147_483_587,
    2_147_483_579,
    2_147_483_563,
    2_147_483_549,
    2_147_483_543,
    2_147_483_497,
    2_147_483_489,
)
EXACT_COLUMN_LIMIT = 2000


class InternalConsistencyError(RuntimeError):
    """Cross-checks disagreed; indicates a bug, not bad input."""


class UnionFind:
    """Disjoint sets over arbitrary hashable items, with path compression."""

    def __init__(self):
        self.parent: dict = {}

    def add(self, x):
        if x not in self.parent:
            self.parent[x] = x

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra

    def component_count(self) -> int:
        return sum(1 for x in self.parent if self.parent[x] == x)


@dataclass(frozen=True)
class BoundaryMatrix:
    """Oriented boundary from j-chains to (j-1)-chains, stored column-sparse.

    Rows and columns are indexed by the lexicographically sorted faces; the
    column of a j-face has its j+1 alternating-sign entries sorted by row.
    """

    j: int
    n_rows: int
    n_cols: int
    indptr: np.ndarray
    rows: np.ndarray
    vals: np.ndarray
    row_faces: tuple
    col_faces: tuple

    @property
    def shape(self) -> tuple[int, int]:
        return (self.n_rows, self.n_cols)

    def to_dense(self) -> np.ndarray:
        out = np.zeros((self.n_rows, self.n_cols), dtype=np.int64)
        for c in range(self.n_cols):
            for t in range(self.indptr[c], self.indptr[c + 1]):
                out[self.rows[t], c] = self.vals[t]
        return out

    def column(self, c: int) -> dict[int, int]:
        return {
            int(self.rows[t]): int(self.vals[t])
            for t in range(self.indptr[c], self.indptr[c + 1])
        }


def boundary_matrix(Y: SimplicialComplex, j: int) -> BoundaryMatrix:
    """Boundary operator of Y in dimension j (1 <= j <= r)."""
    if j < 1 or j > Y.r:
        raise ValueError(f"need 1 <= j <= {Y.r}")
    row_faces = Y.faces(j - 1)
    col_faces = Y.faces(j)
    row_index = {f: i for i, f in enumerate(row_faces)}
    indptr = np.zeros(len(col_faces) + 1, dtype=np.int64)
    rows = np.empty(len(col_faces) * (j + 1), dtype=np.int32)
    vals = np.empty(len(col_faces) * (j + 1), dtype=np.int64)
    pos = 0
    for c, face in enumerate(col_faces):
        entries = []
        for t in range(j + 1):
            sub = face[:t] + face[t + 1 :]
            entries.append((row_index[sub], -1 if t % 2 else 1))
        entries.sort()
        for ri, sign in entries:
            rows[pos] = ri
            vals[pos] = sign
            pos += 1
        indptr[c + 1] = pos
    return BoundaryMatrix(
        j, len(row_faces), len(col_faces), indptr, rows, vals, row_faces, col_faces
    )


# -- ranks ---------------------------------------------------------------------


def rank_mod(mat: BoundaryMatrix, prime: int) -> int:
    if mat.n_cols == 0:
        return 0
    return kernels.rank_mod_p(mat.indptr, mat.rows, mat.vals, mat.n_rows, prime)


def rank_exact(mat: BoundaryMatrix) -> int:
    """Rank over Q by sparse column reduction in exact rational arithmetic."""
    if mat.n_cols > EXACT_COLUMN_LIMIT:
        raise ValueError(
            f"exact elimination limited to {EXACT_COLUMN_LIMIT} columns"
        )
    pivots: dict[int, dict[int, Fraction]] = {}
    rk = 0
    for c in range(mat.n_cols):
        col = {r: Fraction(v) for r, v in mat.column(c).items() if v}
        while col:
            low = max(col)
            piv = pivots.get(low)
            if piv is None:
                pivots[low] = col
                rk += 1
                break
            scale = col[low] / piv[low]
            for r, v in piv.items():
                nv = col.get(r, Fraction(0)) - scale * v
                if nv:
                    col[r] = nv
                else:
                    col.pop(r, None)
        # empty column contributes nothing
    return rk


def _secondary_prime(mat: BoundaryMatrix) -> int:
    idx = (mat.n_cols * 1_000_003 + mat.n_rows) % len(SECONDARY_PRIMES)
    return SECONDARY_PRIMES[idx]


def rank(mat: BoundaryMatrix, method: str = "auto") -> int:
    """Rank over Q with the dual-prime verification protocol."""
    if mat.n_cols == 0 or mat.n_rows == 0:
        return 0
    if method == "exact":
        return rank_exact(mat)
    if method == "modp":
        return rank_mod(mat, PRIMARY_PRIME)
    if method != "auto":
        raise ValueError("method must be auto, modp, or exact")
    r1 = rank_mod(mat, PRIMARY_PRIME)
    p2 = _secondary_prime(mat)
    r2 = rank_mod(mat, p2)
    if r1 == r2:
        return r1
    p3 = SECONDARY_PRIMES[(SECONDARY_PRIMES.index(p2) + 1) % len(SECONDARY_PRIMES)]
    r3 = rank_mod(mat, p3)
    if mat.n_cols <= EXACT_COLUMN_LIMIT:
        return rank_exact(mat)
    # ranks mod p never exceed the rational rank, so the largest wins
    return max(r1, r2, r3)


# -- kernel bases (used by minimal-cycle extraction) ----------------------------


def kernel_basis_mod_p(
    mat: BoundaryMatrix, prime: int = PRIMARY_PRIME, columns: Sequence[int] | None = None
) -> list[dict[int, int]]:
    """Basis of the null space over GF(prime), as {column index: coeff} maps.

    ``columns`` restricts to a subset of columns (used when hunting cycles
    supported on a sub-collection of top faces).
    """
    cols = list(range(mat.n_cols)) if columns is None else list(columns)
    pivots: dict[int, tuple[dict[int, int], dict[int, int]]] = {}
    basis: list[dict[int, int]] = []
    for c in cols:
        col = {r: v % prime for r, v in mat.column(c).items() if v % prime}
        comb = {c: 1}
        while col:
            low = max(col)
            piv = pivots.get(low)
            if piv is None:
                pivots[low] = (col, comb)
                break
            pcol, pcomb = piv
            scale = (col[low] * pow(pcol[low], prime - 2, prime)) % prime
            for r, v in pcol.items():
                nv = (col.get(r, 0) - scale * v) % prime
                if nv:
                    col[r] = nv
                else:
                    col.pop(r, None)
            for r, v in pcomb.items():
                nv = (comb.get(r, 0) - scale * v) % prime
                if nv:
                    comb[r] = nv
                else:
                    comb.pop(r, None)
        if not col:
            basis.append(comb)
    return basis


def reduce_against(
    vec: dict[int, int], pivots: dict[int, dict[int, int]], prime: int
) -> dict[int, int]:
    """Reduce a sparse vector (over row indices) against pivot columns."""
    vec = {r: v % prime for r, v in vec.items() if v % prime}
    while vec:
        low = max(vec)
        piv = pivots.get(low)
        if piv is None:
            return vec
        scale = (vec[low] * pow(piv[low], prime - 2, prime)) % prime
        for r, v in piv.items():
            nv = (vec.get(r, 0) - scale * v) % prime
            if nv:
                vec[r] = nv
            else:
                vec.pop(r, None)
    return vec


def column_space_pivots(
    mat: BoundaryMatrix, prime: int = PRIMARY_PRIME
) -> dict[int, dict[int, int]]:
    """Reduced pivot columns spanning the column space over GF(prime)."""
    pivots: dict[int, dict[int, int]] = {}
    for c in range(mat.n_cols):
        col = {r: v % prime for r, v in mat.column(c).items() if v % prime}
        col = reduce_against(col, pivots, prime)
        if col:
            pivots[max(col)] = col
    return pivots


# -- Betti numbers ---------------------------------------------------------------


@dataclass(frozen=True)
class BettiVector:
    """Rational Betti numbers b_0..b_r and the reduced variant."""

    b: tuple[int, ...]

    @property
    def reduced(self) -> tuple[int, ...]:
        if not self.b:
            return ()
        head = max(self.b[0] - 1, 0)
        return (head,) + self.b[1:]

    def __getitem__(self, j: int) -> int:
        return self.b[j]


def betti(Y: SimplicialComplex, method: str = "auto") -> BettiVector:
    """b_j = f_j - rank d_j - rank d_{j+1}; the empty complex has all zeros.

    Euler, Morse, and union-find consistency are verified on every call.
    """
    f = Y.f_vector()
    dim = Y.dim
    ranks = [0] * (Y.r + 2)
    for j in range(1, dim + 1):
        ranks[j] = rank(boundary_matrix(Y, j), method)
    b = tuple(f[j] - ranks[j] - ranks[j + 1] for j in range(Y.r + 1))
    bv = BettiVector(b)
    _verify(Y, f, bv)
    return bv


def connected_components(Y: SimplicialComplex):
    """Component count and a vertex -> representative map, via union-find."""
    uf = UnionFind()
    for (v,) in Y.faces(0):
        uf.add(v)
    for u, v in Y.faces(1):
        uf.union(u, v)
    labels = {v: uf.find(v) for (v,) in Y.faces(0)}
    return uf.component_count(), labels


@dataclass(frozen=True)
class MorseReport:
    """Per-dimension Morse bounds f_j - f_{j+1} - f_{j-1} <= b_j <= f_j."""

    bounds: tuple[tuple[int, int, int], ...]
    ok: bool


def morse_check(Y: SimplicialComplex, bv: BettiVector | None = None) -> MorseReport:
    if bv is None:
        bv = betti(Y)
    f = Y.f_vector()
    ext = (0,) + f + (0,)
    rows = []
    ok = True
    for j in range(Y.r + 1):
        lower = f[j] - ext[j + 2] - ext[j]
        rows.append((lower, bv[j], f[j]))
        if not lower <= bv[j] <= f[j]:
            ok = False
    report = MorseReport(tuple(rows), ok)
    if not ok:
        raise InternalConsistencyError(f"Morse inequalities violated: {rows}")
    return report


def _verify(Y: SimplicialComplex, f: tuple[int, ...], bv: BettiVector) -> None:
    if any(x < 0 for x in bv.b):
        raise InternalConsistencyError(f"negative Betti number: {bv.b}")
    euler_f = sum((-1) ** j * f[j] for j in range(Y.r + 1))
    euler_b = sum((-1) ** j * bv.b[j] for j in range(Y.r + 1))
    if euler_f != euler_b:
        raise InternalConsistencyError(
            f"Euler characteristic mismatch: faces {euler_f} vs Betti {euler_b}"
        )
    ext = (0,) + f + (0,)
    for j in range(Y.r + 1):
        if not f[j] - ext[j + 2] - ext[j] <= bv.b[j] <= f[j]:
            raise InternalConsistencyError(f"Morse inequality fails at j={j}")
    count, _ = connected_components(Y)
    if count != bv.b[0]:
        raise InternalConsistencyError(
            f"b_0={bv.b[0]} disagrees with union-find components={count}"
        )
