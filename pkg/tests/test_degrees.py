"""Degrees, histograms, expectations, concentration, purity."""

import math
from fractions import Fraction

import pytest

from rsc import model
from rsc.cycles import sphere_generators
from rsc.degrees import (
    concentration_report,
    degree,
    degree_histogram,
    expected_fds,
    isolated_fraction,
    lambda_weight,
    purity_check,
)
from rsc.model import SimplicialComplex
from rsc.phase import expected_fd
from rsc.sampler import SampleSpec, sample


def test_degree_examples(triangle_boundary, filled_triangle):
    assert degree(triangle_boundary, (1, 2)) == 0
    assert degree(filled_triangle, (1, 2)) == 1
    full = SimplicialComplex.full_skeleton(7, 2)
    assert degree(full, (2, 5)) == 5  # n - 2 extending vertices


def test_degree_requires_membership(filled_triangle):
    with pytest.raises(ValueError):
        degree(filled_triangle, (1, 2, 3, 4))


def test_histogram_filled_triangle(filled_triangle):
    hist = degree_histogram(filled_triangle, 1)
    assert hist.counts == {1: 3}
    assert hist.total == 3


def test_histogram_total_is_fd():
    for seed in range(6):
        Y = sample(SampleSpec(n=10, r=2, p=(0.9, 0.5, 0.6), seed=seed))
        for d in range(Y.r + 1):
            hist = degree_histogram(Y, d)
            assert hist.total == Y.f_vector()[d]
            assert sum(hist.counts.values()) == hist.total


def test_histogram_matches_per_face_degree():
    Y = sample(SampleSpec(n=9, r=2, p=(1, 0.6, 0.7), seed=4))
    hist = degree_histogram(Y, 1)
    direct: dict[int, int] = {}
    for edge in Y.faces(1):
        s = degree(Y, edge)
        direct[s] = direct.get(s, 0) + 1
    assert hist.counts == direct


def test_lambda_weight_s0():
    n, d = 30, 1
    alpha = (0.0, 0.2, 0.4)
    lam = n ** -(0.2 * 2 + 0.4)
    assert lambda_weight(n, d, 0, alpha) == pytest.approx(
        (1 - lam) ** (n - d - 1), rel=1e-12
    )


def test_lambda_weights_sum_to_one():
    n, d = 25, 1
    alpha = (0.1, 0.3, 0.5)
    total = sum(lambda_weight(n, d, s, alpha) for s in range(n - d))
    assert total == pytest.approx(1.0, abs=1e-12)


def test_expected_fds_sums_to_expected_fd():
    n, d = 20, 0
    alpha = (0.2, 0.6)
    total = sum(expected_fds(n, d, s, alpha) for s in range(n))
    assert total == pytest.approx(expected_fd(n, d, alpha).value, rel=1e-9)


def exact_expected_fds(n, r, p, d, s):
    """Closed form in exact rationals: containment times binomial weight."""
    ps = [Fraction(x) for x in p]
    contain = Fraction(1)
    for i in range(d + 1):
        contain *= ps[i] ** math.comb(d + 1, i + 1)
    lam = Fraction(1)
    for j in range(d + 2):
        lam *= ps[j] ** math.comb(d + 1, j)
    trials = n - d - 1
    weight = math.comb(trials, s) * lam**s * (1 - lam) ** (trials - s)
    return math.comb(n, d + 1) * contain * weight


@pytest.mark.parametrize("s", [0, 1, 2])
def test_expected_fds_exact_brute_force(s):
    """The histogram expectation matches full enumeration at n = 4."""
    n, r, d = 4, 2, 1
    p = [Fraction(1, 2)] * 3
    brute = Fraction(0)
    for Y in model.enumerate_complexes(n, r):
        mass = model.probability_mass(Y, p)
        hist = degree_histogram(Y, d)
        brute += mass * hist.counts.get(s, 0)
    assert exact_expected_fds(n, r, p, d, s) == brute
    alpha = tuple(-math.log(float(x)) / math.log(n) for x in p)
    assert expected_fds(n, d, s, alpha) == pytest.approx(float(brute), rel=1e-9)


def test_concentration_full_skeleton():
    """At the all-ones law every edge has degree n - 2, inside the band."""
    for n in (5, 8, 12):
        Y = SimplicialComplex.full_skeleton(n, 2)
        rep = concentration_report(Y, 1, 0.5, (0.0, 0.0, 0.0))
        assert rep.mu == n
        assert rep.out_of_band == 0


def test_concentration_detects_outliers():
    # a lone edge among filled triangles has degree 0, far from mu
    Y = SimplicialComplex.from_faces(5, 2, [(1, 2, 3), (4, 5)], close=True)
    rep = concentration_report(Y, 1, 0.5, (0.0, 0.0, 0.0))
    assert rep.out_of_band >= 1
    assert rep.total == 4


def test_isolated_fraction(triangle_boundary, filled_triangle):
    assert isolated_fraction(triangle_boundary, 1) == 1.0
    assert isolated_fraction(filled_triangle, 1) == 0.0
    empty = SimplicialComplex.empty(3, 1)
    assert isolated_fraction(empty, 1) is None


def test_purity():
    assert purity_check(sphere_generators(2, "cross_polytope"), 2)
    tri_plus_vertex = SimplicialComplex.from_faces(
        4, 1, [(1, 2), (4,)], close=True
    )
    assert not purity_check(tri_plus_vertex, 1)
    assert purity_check(SimplicialComplex.full_skeleton(5, 2), 2)
