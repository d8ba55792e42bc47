"""Links of simplexes, their graphs, normalized Laplacians and spectral gaps.

The 1-skeleton graph of the link of an l-simplex drives two sufficient
criteria: if every such graph (over all l-simplexes, l <= k-2) is nonempty,
connected, and has normalized-Laplacian spectral gap above 1 - 1/(l+2),
then rational homology vanishes in dimensions 1..k-1; and for a pure
2-complex, vertex-link gaps above 1/2 certify property (T) of the
fundamental group.  Both are reported as sufficient conditions only.

Eigenvalues come from the cyclic-Jacobi kernel (tolerance 1e-10); the zero
eigenvalue threshold is 1e-8 and is cross-checked against the union-find
component count.  Isolated link vertices are excluded from the Laplacian
(D^{-1/2} is undefined there) and force connected=False, which is what the
criteria require.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence

import numpy as np

from . import _kernels as kernels
from .homology import UnionFind, betti
from .model import SimplicialComplex

__all__ = [
    "LinkGraph",
    "SpectralReport",
    "GarlandRow",
    "GarlandLevelReport",
    "GarlandCertificate",
    "ZukReport",
    "link",
    "link_graph",
    "link_graphs_at_level",
    "link_parameters",
    "normalized_laplacian",
    "spectral_gap",
    "garland_check",
    "garland_certificate",
    "zuk_check",
    "ZERO_EIGENVALUE_TOL",
    "JACOBI_TOL",
]

ZERO_EIGENVALUE_TOL = 1e-8
JACOBI_TOL = 1e-10


@dataclass(frozen=True)
class LinkGraph:
    """1-skeleton of the link of ``origin``: v iff origin+{v} is a face,
    {u, v} iff origin+{u, v} is a face."""

    origin: tuple[int, ...]
    vertices: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]


def link(Y: SimplicialComplex, sigma: Sequence[int]) -> SimplicialComplex:
    """The link of sigma: faces tau disjoint from sigma with sigma+tau in Y.

    Vertex labels are kept from Y (so f_0 of the link equals the degree of
    sigma); the dimension cap shrinks by |sigma|.
    """
    s = tuple(sigma)
    if not Y.has_face(s):
        raise ValueError(f"{s} is not a face of the complex")
    ell = len(s) - 1
    r_link = max(Y.r - ell - 1, 0)
    sset = set(s)
    levels: list[list[tuple[int, ...]]] = [[] for _ in range(r_link + 1)]
    for j in range(ell + 1, Y.dim + 1):
        for face in Y.faces(j):
            if sset.issubset(face):
                tau = tuple(v for v in face if v not in sset)
                levels[len(tau) - 1].append(tau)
    return SimplicialComplex(Y.n, r_link, [sorted(l) for l in levels])


def link_graph(Y: SimplicialComplex, sigma: Sequence[int]) -> LinkGraph:
    s = tuple(sigma)
    if not Y.has_face(s):
        raise ValueError(f"{s} is not a face of the complex")
    ell = len(s) - 1
    sset = set(s)
    verts = []
    for face in Y.faces(ell + 1):
        if sset.issubset(face):
            (v,) = (x for x in face if x not in sset)
            verts.append(v)
    edges = []
    for face in Y.faces(ell + 2):
        if sset.issubset(face):
            u, v = (x for x in face if x not in sset)
            edges.append((u, v))
    return LinkGraph(s, tuple(sorted(verts)), tuple(sorted(edges)))


def link_graphs_at_level(Y: SimplicialComplex, ell: int) -> dict[tuple, LinkGraph]:
    """Link graphs of every ell-simplex, built in one pass over Y."""
    verts: dict[tuple, list[int]] = {s: [] for s in Y.faces(ell)}
    edges: dict[tuple, list[tuple[int, int]]] = {s: [] for s in Y.faces(ell)}
    for face in Y.faces(ell + 1):
        for t in range(ell + 2):
            s = face[:t] + face[t + 1 :]
            verts[s].append(face[t])
    for face in Y.faces(ell + 2):
        for pair in combinations(range(ell + 3), 2):
            a, b = pair
            s = tuple(face[t] for t in range(ell + 3) if t not in pair)
            edges[s].append((face[a], face[b]))
    return {
        s: LinkGraph(s, tuple(sorted(verts[s])), tuple(sorted(edges[s])))
        for s in Y.faces(ell)
    }


def link_parameters(p: Sequence, d: int) -> tuple:
    """Inclusion parameters of the link of a d-simplex.

    p'_i = prod_{j=i}^{i+d+1} p_j^{C(d+1, j-i)}, for i = 0..r-d-1; exact
    when p is rational.  In exponent form p'_0 = n^{-psi_{d+1}(alpha)}.
    """
    import math

    r = len(p) - 1
    if d + 1 > r:
        raise ValueError("need d + 1 <= r")
    ps = [Fraction(x) if not isinstance(x, float) else x for x in p]
    out = []
    for i in range(r - d):
        acc = ps[i] ** math.comb(d + 1, 0)
        for j in range(i + 1, i + d + 2):
            if j > r:
                break
            acc = acc * (ps[j] ** math.comb(d + 1, j - i))
        out.append(acc)
    return tuple(out)


@dataclass(frozen=True)
class SpectralReport:
    """Connectivity and spectrum of one link graph."""

    connected: bool
    kappa: float | None
    eigenvalues: tuple[float, ...]
    zero_multiplicity: int
    isolated: tuple[int, ...]
    components: int


def normalized_laplacian(graph: LinkGraph):
    """I - D^{-1/2} A D^{-1/2} over the non-isolated vertices.

    Returns (matrix, kept vertices, isolated vertices); raises on an empty
    graph.
    """
    if not graph.vertices:
        raise ValueError("normalized Laplacian of an empty graph")
    degree = {v: 0 for v in graph.vertices}
    for u, v in graph.edges:
        degree[u] += 1
        degree[v] += 1
    kept = [v for v in graph.vertices if degree[v] > 0]
    isolated = tuple(v for v in graph.vertices if degree[v] == 0)
    index = {v: i for i, v in enumerate(kept)}
    m = len(kept)
    lap = np.eye(m)
    for u, v in graph.edges:
        w = 1.0 / np.sqrt(degree[u] * degree[v])
        lap[index[u], index[v]] -= w
        lap[index[v], index[u]] -= w
    return lap, tuple(kept), isolated


def _graph_components(graph: LinkGraph) -> int:
    uf = UnionFind()
    for v in graph.vertices:
        uf.add(v)
    for u, v in graph.edges:
        uf.union(u, v)
    return uf.component_count()


def spectral_gap(graph: LinkGraph, zero_tol: float = ZERO_EIGENVALUE_TOL) -> SpectralReport:
    """Smallest nonzero eigenvalue of the normalized Laplacian, with checks.

    The multiplicity of (numerically) zero eigenvalues must equal the
    number of non-isolated components; isolated vertices count as extra
    components and force connected=False.
    """
    if not graph.vertices:
        raise ValueError("spectral gap of an empty graph")
    components = _graph_components(graph)
    if not graph.edges:
        # every vertex is isolated; the criteria treat this as disconnected
        return SpectralReport(
            connected=False,
            kappa=None,
            eigenvalues=(),
            zero_multiplicity=0,
            isolated=graph.vertices,
            components=components,
        )
    lap, kept, isolated = normalized_laplacian(graph)
    eig = kernels.jacobi_eigenvalues(lap, JACOBI_TOL)
    eig = tuple(float(x) for x in eig)
    if eig[0] < -1e-9 or eig[-1] > 2.0 + 1e-9:
        raise AssertionError(f"normalized Laplacian spectrum escaped [0, 2]: {eig}")
    zero_mult = sum(1 for x in eig if abs(x) <= zero_tol)
    if zero_mult != components - len(isolated):
        raise AssertionError(
            "zero-eigenvalue multiplicity disagrees with component count: "
            f"{zero_mult} vs {components - len(isolated)}"
        )
    nonzero = [x for x in eig if x > zero_tol]
    kappa = min(nonzero) if nonzero else None
    connected = components == 1 and not isolated
    return SpectralReport(connected, kappa, eig, zero_mult, isolated, components)


# -- Garland-style criteria -----------------------------------------------------


@dataclass(frozen=True)
class GarlandRow:
    simplex: tuple[int, ...]
    link_vertices: int
    connected: bool
    kappa: float | None
    passed: bool


@dataclass(frozen=True)
class GarlandLevelReport:
    """Gap checks for every ell-simplex against the threshold 1 - 1/(ell+2)."""

    ell: int
    threshold: float
    rows: tuple[GarlandRow, ...]
    all_pass: bool

    @property
    def implies_vanishing(self) -> int | None:
        """Homology dimension certified to vanish when the level passes."""
        return self.ell + 1 if self.all_pass else None


def garland_check(Y: SimplicialComplex, ell: int) -> GarlandLevelReport:
    """Per-simplex link gap report at level ell.

    A level that passes certifies that homology in dimension ell+1
    vanishes over Q (the links here are exactly the links in the
    (ell+2)-skeleton, which carries that homology).
    """
    if ell < 0:
        raise ValueError("ell must be nonnegative")
    threshold = 1.0 - 1.0 / (ell + 2)
    rows = []
    all_pass = True
    for s, graph in sorted(link_graphs_at_level(Y, ell).items()):
        if not graph.vertices:
            row = GarlandRow(s, 0, False, None, False)
        else:
            rep = spectral_gap(graph)
            ok = rep.connected and rep.kappa is not None and rep.kappa > threshold
            row = GarlandRow(s, len(graph.vertices), rep.connected, rep.kappa, ok)
        rows.append(row)
        all_pass = all_pass and row.passed
    return GarlandLevelReport(ell, threshold, tuple(rows), all_pass)


@dataclass(frozen=True)
class GarlandCertificate:
    """Aggregate over levels 0..k-2 plus the homology cross-check."""

    k: int
    levels: tuple[GarlandLevelReport, ...]
    all_pass: bool
    reduced_betti: tuple[int, ...]
    consistent: bool


def garland_certificate(Y: SimplicialComplex, k: int) -> GarlandCertificate:
    """Run levels 0..k-2 and cross-check the implied vanishing against betti.

    Per level: a pass implies b_{ell+1}(Y) = 0.  ``consistent`` is False
    only when some passing level sees a nonzero Betti number, which would
    mean a bug in the spectra or the homology path.
    """
    if k < 2:
        raise ValueError("certificate needs k >= 2")
    levels = tuple(garland_check(Y, ell) for ell in range(k - 1))
    bv = betti(Y)
    reduced = bv.reduced
    consistent = True
    for level in levels:
        if level.all_pass and reduced[level.ell + 1] != 0:
            consistent = False
    return GarlandCertificate(
        k, levels, all(l.all_pass for l in levels), reduced, consistent
    )


@dataclass(frozen=True)
class ZukRow:
    vertex: int
    connected: bool
    kappa: float | None
    passed: bool


@dataclass(frozen=True)
class ZukReport:
    """Vertex-link gap criterion for property (T); sufficient only."""

    rows: tuple[ZukRow, ...]
    satisfied: bool


def zuk_check(Y: SimplicialComplex) -> ZukReport:
    """Every vertex link connected with gap > 1/2, on a pure 2-complex.

    A True result certifies the criterion holds; False asserts nothing.
    """
    from .degrees import purity_check

    if Y.dim != 2 or not purity_check(Y, 2):
        raise ValueError("criterion requires a pure 2-dimensional complex")
    rows = []
    satisfied = True
    for (v,), graph in sorted(link_graphs_at_level(Y, 0).items()):
        if not graph.vertices:
            row = ZukRow(v, False, None, False)
        else:
            rep = spectral_gap(graph)
            ok = rep.connected and rep.kappa is not None and rep.kappa > 0.5
            row = ZukRow(v, rep.connected, rep.kappa, ok)
        rows.append(row)
        satisfied = satisfied and row.passed
    return ZukReport(tuple(rows), satisfied)
