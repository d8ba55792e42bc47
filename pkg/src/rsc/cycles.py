"""f/h-polynomials, sphere symmetry, strong connectivity, and size bounds.

Above the critical dimension (psi_k > 1 with phi_k < 1, constant exponent)
a random complex contains no strongly connected k-subcomplex on more than

    (k+1) * [1 + (1 - phi_k) / (psi_k - 1)]

vertices, so any minimal k-cycle it contains is at most that large.  For
spheres the h-polynomial symmetry h_i = h_{k+1-i} (with h_i >= 0) sharpens
the bound.  ``minimal_cycle_support`` extracts support-minimal cycles from
a sampled complex so the bound can be checked empirically.

Exponent schedules are rejected here: the size bounds assume a constant
exponent vector.
"""

from __future__ import annotations

import math
from itertools import product
from typing import Sequence

from .homology import (
    PRIMARY_PRIME,
    betti,
    boundary_matrix,
    column_space_pivots,
    kernel_basis_mod_p,
    reduce_against,
)
from .model import SimplicialComplex
from .phase import gamma, is_schedule, phi, psi

__all__ = [
    "h_vector",
    "f_from_h",
    "dehn_sommerville_check",
    "is_strongly_connected",
    "strong_fi_lower_bound",
    "cycle_size_bound",
    "sphere_size_bound",
    "nonembeddable",
    "minimal_cycle_support",
    "sphere_generators",
]


def _constant_alpha(alpha) -> tuple[float, ...]:
    if is_schedule(alpha):
        raise ValueError("size bounds require a constant exponent vector")
    return tuple(float(x) for x in alpha)


def _f_with_empty(f: Sequence[int], k: int) -> list[int]:
    # f_{-1} = 1 for the empty face; pad with zeros up to dimension k
    out = [1] + list(f[: k + 1])
    out.extend(0 for _ in range(k + 2 - len(out)))
    return out


def h_vector(S, k: int) -> tuple[int, ...]:
    """h_0..h_{k+1} of a k-dimensional complex from its face counts.

    h_i = sum_{j<=i} (-1)^{i-j} C(k-j+1, k-i+1) f_{j-1}; in particular
    h_0 = 1 and h_1 = f_0 - k - 1.  Accepts a complex or an f-vector.
    """
    f = S.f_vector() if isinstance(S, SimplicialComplex) else tuple(S)
    fe = _f_with_empty(f, k)
    return tuple(
        sum(
            (-1) ** (i - j) * math.comb(k - j + 1, k - i + 1) * fe[j]
            for j in range(i + 1)
        )
        for i in range(k + 2)
    )


def f_from_h(h: Sequence[int], k: int) -> tuple[int, ...]:
    """Inverse transform: f_{i-1} = sum_j C(k-j+1, k-i+1) h_j, i = 0..k+1.

    Returns (f_0, ..., f_k); the i = 0 row reproduces f_{-1} = h_0 = 1 and
    is checked.
    """
    if len(h) != k + 2:
        raise ValueError(f"need k + 2 = {k + 2} h-entries")
    full = [
        sum(math.comb(k - j + 1, k - i + 1) * h[j] for j in range(i + 1))
        for i in range(k + 2)
    ]
    if full[0] != h[0]:
        raise AssertionError("inverse transform lost the empty face")
    return tuple(full[1:])


def dehn_sommerville_check(S, k: int) -> dict:
    """Symmetry h_i = h_{k+1-i} plus nonnegativity, as spheres satisfy."""
    h = h_vector(S, k)
    symmetric = all(h[i] == h[k + 1 - i] for i in range(k + 2))
    return {"h": h, "symmetric": symmetric, "nonnegative": all(x >= 0 for x in h)}


def is_strongly_connected(S: SimplicialComplex, k: int) -> bool:
    """Facet graph connectivity: k-faces adjacent iff sharing a (k-1)-face.

    Requires a pure k-dimensional complex; non-pure input returns False.
    """
    from .degrees import purity_check
    from .homology import UnionFind

    facets = S.faces(k)
    if not facets:
        return False
    if S.dim != k or not purity_check(S, k):
        return False
    uf = UnionFind()
    for f in facets:
        uf.add(f)
    by_ridge: dict[tuple, tuple | None] = {}
    for f in facets:
        for t in range(k + 1):
            ridge = f[:t] + f[t + 1 :]
            other = by_ridge.get(ridge)
            if other is None:
                by_ridge[ridge] = f
            else:
                uf.union(other, f)
    return uf.component_count() == 1


def strong_fi_lower_bound(k: int, x: int, i: int) -> int:
    """Face-count floor C(k+1, i+1) + x*C(k, i) for strongly connected
    k-complexes on k+1+x vertices."""
    if x < 0:
        raise ValueError("x must be nonnegative")
    return math.comb(k + 1, i + 1) + x * math.comb(k, i)


def _require_above_critical(k: int, alpha) -> tuple[float, float]:
    a = _constant_alpha(alpha)
    pk = psi(k, a)
    fk = phi(k, a)
    if not (pk > 1.0 and fk < 1.0):
        raise ValueError(
            "k not above critical dimension or above real dimension "
            f"(psi_{k}={pk:.6g}, phi_{k}={fk:.6g})"
        )
    return pk, fk


def cycle_size_bound(k: int, alpha) -> float:
    """Vertex ceiling (k+1)[1 + (1-phi_k)/(psi_k-1)] for minimal k-cycles."""
    pk, fk = _require_above_critical(k, alpha)
    return (k + 1) * (1.0 + (1.0 - fk) / (pk - 1.0))


def sphere_size_bound(k: int, alpha) -> float:
    """Sharper vertex ceiling for embedded k-spheres, k >= 2.

    Subtracts alpha_k/(k+1) in the numerator and adds alpha_{k-1}+alpha_k
    in the denominator, so it never exceeds the cycle bound.
    """
    if k < 2:
        raise ValueError("sphere bound needs k >= 2")
    pk, fk = _require_above_critical(k, alpha)
    a = _constant_alpha(alpha)
    ak = a[k] if k < len(a) else 0.0
    akm1 = a[k - 1] if k - 1 < len(a) else 0.0
    return (k + 1) * (
        1.0 + (1.0 - fk - ak / (k + 1)) / (pk - 1.0 + akm1 + ak)
    )


def nonembeddable(S: SimplicialComplex, alpha) -> bool:
    """First-moment criterion: sum_i alpha_i f_i(S) > f_0(S).

    True certifies that S does not embed in a random complex with this
    constant exponent, asymptotically.  For spheres (inputs passing the
    symmetry check) the equivalent h-form
    gamma_0 + gamma_{k+1} + (gamma_1 + gamma_k) h_1 > h_1 + k + 1 is also
    evaluated and must agree with the sphere-size form when psi_k > 1.
    """
    a = _constant_alpha(alpha)
    k = S.dim
    if k < 0:
        return False
    f = S.f_vector()
    lhs = sum(a[i] * f[i] for i in range(min(k, len(a) - 1) + 1))
    verdict = lhs > f[0]
    ds = dehn_sommerville_check(S, k)
    if ds["symmetric"] and ds["nonnegative"] and psi(k, a) > 1.0 and phi(k, a) < 1.0:
        h1 = f[0] - k - 1
        h_form = (
            gamma(0, k, a) + gamma(k + 1, k, a)
            + (gamma(1, k, a) + gamma(k, k, a)) * h1
        ) > h1 + k + 1
        f0_form = f[0] > sphere_size_bound(k, a) if k >= 2 else None
        if f0_form is not None and h_form != f0_form:
            raise AssertionError(
                "h-form and sphere-size form disagree on a symmetric complex"
            )
    return verdict


def minimal_cycle_support(
    Y: SimplicialComplex, k: int, prime: int = PRIMARY_PRIME
) -> list[tuple[tuple[tuple[int, ...], ...], int]]:
    """Support-minimal k-cycles, one per homology generator.

    Starts from kernel vectors of the k-boundary that survive reduction
    against the (k+1)-boundary image, then greedily drops support faces
    while a nonzero cycle persists on the remaining columns.  At the fixed
    point the support carries a one-dimensional cycle space and no proper
    subset carries any cycle, all over GF(prime).  For the support's
    down-closure S this means b_k(S) = 1 with b_k vanishing on every proper
    subcomplex (a proper subcomplex must drop a top face, hence its cycles
    would live on a proper support subset); over the rationals the same
    holds except for primes that change a boundary rank, which the dual
    verification elsewhere makes vanishingly unlikely.

    Returns (support faces, vertex count of the support's closure) pairs;
    empty when b_k = 0.
    """
    if k < 1 or k > Y.r:
        raise ValueError(f"need 1 <= k <= {Y.r}")
    bv = betti(Y)
    if bv[k] == 0:
        return []
    mat = boundary_matrix(Y, k)
    cycles = kernel_basis_mod_p(mat, prime)
    if k + 1 <= Y.r and Y.faces(k + 1):
        pivots = column_space_pivots(boundary_matrix(Y, k + 1), prime)
    else:
        pivots = {}
    generators: list[dict[int, int]] = []
    for vec in cycles:
        residual = reduce_against(dict(vec), pivots, prime)
        if residual:
            generators.append(residual)
            pivots[max(residual)] = residual
        if len(generators) == bv[k]:
            break
    out = []
    for vec in generators:
        support = sorted(vec)
        while True:
            shrunk = None
            for drop in support:
                rest = [c for c in support if c != drop]
                basis = kernel_basis_mod_p(mat, prime, columns=rest)
                if basis:
                    shrunk = sorted(basis[0])
                    break
            if shrunk is None:
                break
            support = shrunk
        faces = tuple(mat.col_faces[c] for c in support)
        vertices = sorted({v for face in faces for v in face})
        out.append((faces, len(vertices)))
    return out


def sphere_generators(k: int, kind: str) -> SimplicialComplex:
    """Test spheres: the boundary of a (k+1)-simplex or the k-cross-polytope.

    simplex_boundary(k) has k+2 vertices; cross_polytope(k) has 2k+2
    vertices arranged in antipodal pairs (2i-1, 2i), one per axis.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    if kind == "simplex_boundary":
        n = k + 2
        faces = [c for i in range(k + 1) for c in _subsets(range(1, n + 1), i + 1)]
        return SimplicialComplex.from_faces(n, k, faces, validate=False)
    if kind == "cross_polytope":
        n = 2 * k + 2
        facets = [
            tuple(sorted(2 * i + 1 + b for i, b in enumerate(bits)))
            for bits in product((0, 1), repeat=k + 1)
        ]
        return SimplicialComplex.from_faces(n, k, facets, close=True)
    raise ValueError("kind must be simplex_boundary or cross_polytope")


def _subsets(items, size):
    from itertools import combinations

    return combinations(items, size)
