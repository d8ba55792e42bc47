"""Boundary matrices, rank backends, Betti numbers, Morse checks."""

import numpy as np
import pytest

from rsc import model
from rsc.homology import (
    PRIMARY_PRIME,
    BettiVector,
    betti,
    boundary_matrix,
    connected_components,
    kernel_basis_mod_p,
    morse_check,
    rank,
    rank_exact,
    rank_mod,
)
from rsc.model import SimplicialComplex
from rsc.sampler import SampleSpec, sample


def test_single_edge_column():
    Y = SimplicialComplex.from_faces(2, 1, [(1, 2)], close=True)
    mat = boundary_matrix(Y, 1)
    assert mat.to_dense().tolist() == [[-1], [1]]


def test_boundary_of_boundary_zero():
    Y = SimplicialComplex.full_skeleton(4, 2)
    d1 = boundary_matrix(Y, 1).to_dense()
    d2 = boundary_matrix(Y, 2).to_dense()
    assert not (d1 @ d2).any()


def test_column_nonzero_count():
    Y = sample(SampleSpec(n=9, r=2, p=(0.9, 0.7, 0.6), seed=11))
    for j in range(1, Y.dim + 1):
        mat = boundary_matrix(Y, j)
        for c in range(mat.n_cols):
            assert mat.indptr[c + 1] - mat.indptr[c] == j + 1


def test_betti_triangle_boundary(triangle_boundary):
    assert betti(triangle_boundary).b == (1, 1, 0)


def test_betti_two_skeleton_of_5_simplex():
    Y = SimplicialComplex.full_skeleton(5, 2)
    bv = betti(Y)
    assert bv.b == (1, 0, 4)
    # independent oracle: SVD ranks of the dense boundary operators
    d1 = boundary_matrix(Y, 1).to_dense().astype(float)
    d2 = boundary_matrix(Y, 2).to_dense().astype(float)
    r1 = np.linalg.matrix_rank(d1)
    r2 = np.linalg.matrix_rank(d2)
    f = Y.f_vector()
    assert bv.b == (f[0] - r1, f[1] - r1 - r2, f[2] - r2)


def test_betti_two_isolated_vertices():
    Y = SimplicialComplex.from_faces(3, 1, [(1,), (3,)])
    bv = betti(Y)
    assert bv.b == (2, 0)
    assert bv.reduced == (1, 0)


def test_betti_empty():
    assert betti(SimplicialComplex.empty(5, 2)).b == (0, 0, 0)


def test_betti_k4(k4):
    bv = betti(k4)
    assert bv.b == (1, 3)
    report = morse_check(k4, bv)
    assert report.bounds[1] == (6 - 0 - 4, 3, 6)


def test_connected_components_path():
    Y = SimplicialComplex.from_faces(3, 1, [(1, 2), (2, 3)], close=True)
    count, labels = connected_components(Y)
    assert count == 1
    assert len(set(labels.values())) == 1


def test_forest_components():
    # two trees: 1-2-3 and 5-6
    Y = SimplicialComplex.from_faces(6, 1, [(1, 2), (2, 3), (5, 6)], close=True)
    count, _ = connected_components(Y)
    bv = betti(Y)
    assert count == bv[0] == 2
    assert bv[1] == 0


def test_b0_agreement_random():
    for seed in range(30):
        Y = sample(SampleSpec(n=12, r=1, p=(0.6, 0.15), seed=seed))
        count, _ = connected_components(Y)
        assert count == betti(Y)[0]


def test_morse_holds_on_samples():
    for seed in range(10):
        Y = sample(SampleSpec(n=9, r=2, p=(0.8, 0.6, 0.4), seed=seed))
        assert morse_check(Y).ok


def test_collapse_accounting(filled_triangle):
    """Deleting one top face moves exactly one unit between b_dim and
    b_{dim-1}."""
    before = betti(filled_triangle)
    faces = [
        f
        for i in range(filled_triangle.r)
        for f in filled_triangle.faces(i)
    ]
    without_top = SimplicialComplex.from_faces(3, 2, faces)
    after = betti(without_top)
    moved = abs(after[2] - before[2]) + abs(after[1] - before[1])
    assert moved == 1


def test_rank_backends_agree():
    rng = np.random.default_rng(5)
    for seed in range(25):
        Y = sample(
            SampleSpec(n=8, r=2, p=(0.9, float(rng.uniform(0.3, 0.9)), 0.5), seed=seed)
        )
        for j in range(1, max(Y.dim, 0) + 1):
            mat = boundary_matrix(Y, j)
            r_auto = rank(mat)
            assert r_auto == rank_mod(mat, PRIMARY_PRIME)
            assert r_auto == rank_mod(mat, 2_147_483_629)
            assert r_auto == rank_exact(mat)
            dense = mat.to_dense().astype(float)
            assert r_auto == np.linalg.matrix_rank(dense)


def test_rank_empty_matrix():
    Y = SimplicialComplex.from_faces(3, 1, [(1,), (2,)])
    mat = boundary_matrix(Y, 1)
    assert mat.n_cols == 0
    assert rank(mat) == 0


def test_kernel_basis_octahedron():
    from rsc.cycles import sphere_generators

    Y = sphere_generators(2, "cross_polytope")
    mat = boundary_matrix(Y, 2)
    basis = kernel_basis_mod_p(mat)
    assert len(basis) == 1
    assert len(basis[0]) == 8  # the fundamental 2-cycle uses all 8 triangles


def test_euler_identity_random():
    for seed in range(10):
        Y = sample(SampleSpec(n=10, r=3, p=(0.8, 0.7, 0.5, 0.5), seed=seed))
        f = Y.f_vector()
        bv = betti(Y)
        euler_f = sum((-1) ** j * f[j] for j in range(Y.r + 1))
        euler_b = sum((-1) ** j * bv[j] for j in range(Y.r + 1))
        assert euler_f == euler_b


def test_betti_vector_reduced_rule():
    assert BettiVector((3, 1)).reduced == (2, 1)
    assert BettiVector((0, 0)).reduced == (0, 0)
