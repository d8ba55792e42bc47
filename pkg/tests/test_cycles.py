"""h-vectors, sphere symmetry, size bounds, minimal-cycle extraction."""

import math

import pytest
from hypothesis import HealthCheck, assume, given, settings
from hypothesis import strategies as st

from rsc.cycles import (
    cycle_size_bound,
    dehn_sommerville_check,
    f_from_h,
    h_vector,
    is_strongly_connected,
    minimal_cycle_support,
    nonembeddable,
    sphere_generators,
    sphere_size_bound,
    strong_fi_lower_bound,
)
from rsc.homology import betti, boundary_matrix, kernel_basis_mod_p
from rsc.model import SimplicialComplex
from rsc.phase import phi, psi
from rsc.sampler import SampleSpec, sample


def test_h_vector_triangle_boundary():
    assert h_vector((3, 3), 1) == (1, 1, 1)


def test_h_vector_octahedron():
    assert h_vector((6, 12, 8), 2) == (1, 3, 3, 1)


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_h_vector_simplex_boundary_all_ones(k):
    S = sphere_generators(k, "simplex_boundary")
    assert h_vector(S, k) == (1,) * (k + 2)


def test_f_from_h_examples():
    assert f_from_h((1, 1, 1), 1) == (3, 3)


@given(
    st.integers(1, 4),
    st.lists(st.integers(0, 50), min_size=1, max_size=5),
)
@settings(max_examples=150)
def test_round_trip_identity(k, tail):
    h = tuple([1] + tail)[: k + 2]
    h = h + (0,) * (k + 2 - len(h))
    assert h_vector(f_from_h(h, k), k) == h


def test_dehn_sommerville():
    assert dehn_sommerville_check((6, 12, 8), 2) == {
        "h": (1, 3, 3, 1),
        "symmetric": True,
        "nonnegative": True,
    }
    disk = dehn_sommerville_check((3, 3, 1), 2)  # one filled triangle
    assert disk["h"] == (1, 0, 0, 0)
    assert not disk["symmetric"]
    simplex_bdy = dehn_sommerville_check((4, 6, 4), 2)
    assert simplex_bdy["symmetric"]


def test_strong_connectivity():
    assert is_strongly_connected(sphere_generators(2, "cross_polytope"), 2)
    shared_vertex = SimplicialComplex.from_faces(
        5, 2, [(1, 2, 3), (1, 4, 5)], close=True
    )
    assert not is_strongly_connected(shared_vertex, 2)
    shared_edge = SimplicialComplex.from_faces(4, 2, [(1, 2, 3), (1, 2, 4)], close=True)
    assert is_strongly_connected(shared_edge, 2)
    non_pure = SimplicialComplex.from_faces(4, 2, [(1, 2, 3), (4,)], close=True)
    assert not is_strongly_connected(non_pure, 2)


def test_strong_fi_lower_bound_values():
    for k in range(1, 5):
        for i in range(k + 1):
            assert strong_fi_lower_bound(k, 0, i) == math.comb(k + 1, i + 1)
    # octahedron: x = 6 - 3 = 3, bounds (6, 9, 4) against f = (6, 12, 8)
    octa = sphere_generators(2, "cross_polytope")
    f = octa.f_vector()
    x = f[0] - 3
    bounds = [strong_fi_lower_bound(2, x, i) for i in range(3)]
    assert bounds == [6, 9, 4]
    assert all(f[i] >= bounds[i] for i in range(3))
    assert f[0] == bounds[0]  # tight at i = 0


def test_strong_bound_on_strongly_connected_samples():
    """Every strongly connected sample satisfies the face-count floor with
    x = f_0 - k - 1."""
    checked = 0
    for seed in range(40):
        Y = sample(SampleSpec(n=7, r=2, p=(0.9, 0.8, 0.7), seed=seed))
        k = Y.dim
        if k < 1:
            continue
        top = Y.skeleton(k)
        # restrict to the pure part: keep only faces of top-dimensional faces
        closure = SimplicialComplex.from_faces(
            Y.n, k, Y.faces(k), close=True
        )
        if not is_strongly_connected(closure, k):
            continue
        checked += 1
        f = closure.f_vector()
        x = f[0] - k - 1
        for i in range(k + 1):
            assert f[i] >= strong_fi_lower_bound(k, x, i)
    assert checked >= 3


def test_cycle_size_bound_substitution():
    assert cycle_size_bound(2, (0.0, 0.0, 1.5)) == pytest.approx(6.0)


def test_cycle_size_bound_preconditions():
    with pytest.raises(ValueError, match="critical dimension"):
        cycle_size_bound(2, (0.0, 0.0, 0.5))  # psi_2 < 1
    with pytest.raises(ValueError, match="critical dimension"):
        cycle_size_bound(1, (0.0, 2.5))  # phi_1 = 1.25 > 1
    with pytest.raises(ValueError):
        cycle_size_bound(2, [(10, (0.0, 0.0, 1.5))])  # schedules rejected


def test_cycle_size_bound_blowup_near_hyperplane():
    values = [
        cycle_size_bound(2, (0.0, 0.0, a2)) for a2 in (1.5, 1.2, 1.05, 1.01)
    ]
    assert values == sorted(values)
    assert values[-1] > 100


def test_sphere_size_bound_substitution():
    assert sphere_size_bound(2, (0.0, 0.0, 1.5)) == pytest.approx(3.0)


def test_sphere_bound_degenerates_to_cycle_bound():
    # alpha_{k-1} = alpha_k = 0 with psi_k driven by lower coordinates
    a = (0.2, 0.3, 0.0, 0.0)
    k = 3
    assert psi(k, a) > 1 and phi(k, a) < 1
    assert sphere_size_bound(k, a) == pytest.approx(cycle_size_bound(k, a))


@given(st.lists(st.floats(0, 0.6, allow_nan=False), min_size=3, max_size=5))
@settings(max_examples=300, suppress_health_check=[HealthCheck.filter_too_much])
def test_sphere_bound_never_exceeds_cycle_bound(a):
    a = tuple(a)
    k = len(a) - 1
    assume(psi(k, a) > 1.001 and phi(k, a) < 0.999)
    assert sphere_size_bound(k, a) <= cycle_size_bound(k, a) + 1e-9


def test_nonembeddable():
    octa = sphere_generators(2, "cross_polytope")
    assert not nonembeddable(octa, (0.0, 0.0, 0.0))
    assert nonembeddable(octa, (0.0, 0.0, 1.5))  # 1.5 * 8 = 12 > 6
    simplex_bdy = sphere_generators(2, "simplex_boundary")
    assert nonembeddable(simplex_bdy, (0.0, 0.0, 1.5))  # 1.5 * 4 = 6 > 4


def test_minimal_cycle_octahedron():
    octa = sphere_generators(2, "cross_polytope")
    supports = minimal_cycle_support(octa, 2)
    assert len(supports) == 1
    faces, nverts = supports[0]
    assert len(faces) == 8
    assert nverts == 6


def test_minimal_cycle_two_triangles():
    Y = SimplicialComplex.from_faces(
        6, 1, [(1, 2), (1, 3), (2, 3), (4, 5), (4, 6), (5, 6)], close=True
    )
    supports = minimal_cycle_support(Y, 1)
    assert len(supports) == 2
    assert all(len(faces) == 3 and nverts == 3 for faces, nverts in supports)


def test_minimal_cycle_empty_when_acyclic():
    tree = SimplicialComplex.from_faces(4, 1, [(1, 2), (2, 3), (3, 4)], close=True)
    assert minimal_cycle_support(tree, 1) == []


def test_minimal_cycle_support_is_minimal():
    """Dropping any face of a returned support kills every cycle on it."""
    Y = sample(SampleSpec(n=9, r=1, p=(1, 0.45), seed=3))
    supports = minimal_cycle_support(Y, 1)
    assert supports  # this seed has cycles
    mat = boundary_matrix(Y, 1)
    col_of = {f: i for i, f in enumerate(mat.col_faces)}
    for faces, nverts in supports:
        closure = SimplicialComplex.from_faces(Y.n, 1, faces, close=True)
        assert betti(closure)[1] >= 1
        cols = [col_of[f] for f in faces]
        for drop in cols:
            rest = [c for c in cols if c != drop]
            assert kernel_basis_mod_p(mat, columns=rest) == []


def test_minimal_cycle_rejects_bad_dimension():
    Y = SimplicialComplex.full_skeleton(3, 1)
    with pytest.raises(ValueError):
        minimal_cycle_support(Y, 2)


def test_sphere_generators_f_vectors():
    assert sphere_generators(2, "simplex_boundary").f_vector() == (4, 6, 4)
    assert sphere_generators(2, "cross_polytope").f_vector() == (6, 12, 8)
    assert sphere_generators(3, "cross_polytope").f_vector() == (8, 24, 32, 16)
    with pytest.raises(ValueError):
        sphere_generators(2, "dodecahedron")


@pytest.mark.parametrize(
    "kind,ks", [("simplex_boundary", (1, 2, 3, 4)), ("cross_polytope", (1, 2, 3))]
)
def test_sphere_generators_are_spheres(kind, ks):
    for k in ks:
        S = sphere_generators(k, kind)
        ds = dehn_sommerville_check(S, k)
        assert ds["symmetric"] and ds["nonnegative"]
        b = betti(S).b
        assert b[0] == 1 and b[k] == 1
        assert all(b[j] == 0 for j in range(1, k))
