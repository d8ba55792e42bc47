"""Subcomplexes of the n-simplex with a dimension cap, and their exact law.

Faces are strictly increasing tuples of 1-based vertex ids.  A complex on
vertex set {1..n} with dimension cap r stores its faces per dimension in
lexicographic order; instances are immutable after construction and safe to
share across workers.

The inclusion law assigns a complex Y the mass

    prod_i  p_i^{f_i(Y)} * (1 - p_i)^{e_i(Y)},

where f_i counts i-faces and e_i counts external i-faces (absent simplexes
whose whole boundary is present), with the 0^0 = 1 convention applied per
factor.  ``probability_mass`` evaluates this exactly in rational arithmetic;
``log_probability_mass`` is the floating-point companion for large
instances.
"""

from __future__ import annotations

import json
import math
from fractions import Fraction
from itertools import chain, combinations
from typing import Iterable, Iterator, Sequence

__all__ = [
    "SimplicialComplex",
    "InvalidComplexError",
    "ValidationReport",
    "f_vector",
    "external_faces",
    "external_face_list",
    "probability_mass",
    "log_probability_mass",
    "enumerate_complexes",
    "is_valid_complex",
    "to_json",
    "from_json",
    "to_text",
    "from_text",
]

ENUMERATION_VERTEX_CAP = 6


class InvalidComplexError(ValueError):
    """Raised when face data violates the complex invariants."""


class ValidationReport:
    """Outcome of a structural validation pass."""

    def __init__(self, ok: bool, problems: list[str]):
        self.ok = ok
        self.problems = problems

    def __bool__(self) -> bool:
        return self.ok

    def __repr__(self) -> str:
        return f"ValidationReport(ok={self.ok}, problems={self.problems!r})"


def _as_face(face) -> tuple[int, ...]:
    t = tuple(int(v) for v in face)
    if not t:
        raise InvalidComplexError("empty vertex tuple is not a face")
    if any(a >= b for a, b in zip(t, t[1:])):
        raise InvalidComplexError(f"face {t} is not strictly increasing")
    return t


class SimplicialComplex:
    """Down-closed family of faces on {1..n} with dimension at most r."""

    __slots__ = ("n", "r", "_levels", "_sets")

    def __init__(self, n: int, r: int, levels: Sequence[Sequence[tuple[int, ...]]]):
        if n < 0 or r < 0:
            raise InvalidComplexError("n and r must be nonnegative")
        self.n = int(n)
        self.r = int(r)
        lv = [tuple(level) for level in levels]
        if len(lv) < r + 1:
            lv.extend(() for _ in range(r + 1 - len(lv)))
        if len(lv) != r + 1:
            raise InvalidComplexError("more face levels than the dimension cap")
        self._levels: tuple[tuple[tuple[int, ...], ...], ...] = tuple(lv)
        self._sets: list[frozenset | None] = [None] * (r + 1)

    # -- construction ------------------------------------------------------

    @classmethod
    def empty(cls, n: int, r: int) -> "SimplicialComplex":
        return cls(n, r, [])

    @classmethod
    def full_skeleton(cls, n: int, r: int) -> "SimplicialComplex":
        """The r-skeleton of the simplex on {1..n}."""
        levels = [
            sorted(combinations(range(1, n + 1), i + 1)) for i in range(r + 1)
        ]
        return cls(n, r, levels)

    @classmethod
    def from_faces(
        cls,
        n: int,
        r: int,
        faces: Iterable[Iterable[int]],
        *,
        close: bool = False,
        validate: bool = True,
    ) -> "SimplicialComplex":
        """Build a complex from an unordered face iterable.

        With ``close=True`` the down-closure is taken; otherwise the input
        must already be down-closed (validated unless ``validate=False``).
        """
        per_dim: list[set[tuple[int, ...]]] = [set() for _ in range(r + 1)]
        for face in faces:
            t = _as_face(face)
            if len(t) - 1 > r:
                raise InvalidComplexError(f"face {t} exceeds dimension cap {r}")
            if t[0] < 1 or t[-1] > n:
                raise InvalidComplexError(f"face {t} has vertex ids outside 1..{n}")
            per_dim[len(t) - 1].add(t)
        if close:
            for i in range(r, 0, -1):
                for face in per_dim[i]:
                    for j in range(len(face)):
                        per_dim[i - 1].add(face[:j] + face[j + 1 :])
        cx = cls(n, r, [sorted(s) for s in per_dim])
        if validate and not close:
            report = is_valid_complex(cx)
            if not report.ok:
                raise InvalidComplexError("; ".join(report.problems))
        return cx

    # -- accessors ---------------------------------------------------------

    def faces(self, i: int) -> tuple[tuple[int, ...], ...]:
        """Faces of dimension i in lexicographic order."""
        if i < 0 or i > self.r:
            return ()
        return self._levels[i]

    def all_faces(self) -> Iterator[tuple[int, ...]]:
        return chain.from_iterable(self._levels)

    def has_face(self, face: Sequence[int]) -> bool:
        t = tuple(face)
        i = len(t) - 1
        if i < 0 or i > self.r:
            return False
        s = self._sets[i]
        if s is None:
            s = frozenset(self._levels[i])
            self._sets[i] = s
        return t in s

    @property
    def dim(self) -> int:
        """Dimension of the complex; -1 when empty."""
        for i in range(self.r, -1, -1):
            if self._levels[i]:
                return i
        return -1

    def f_vector(self) -> tuple[int, ...]:
        return tuple(len(level) for level in self._levels)

    def skeleton(self, k: int) -> "SimplicialComplex":
        """The k-skeleton, keeping the ambient n and cap min(k, r)."""
        k = min(k, self.r)
        return SimplicialComplex(self.n, k, self._levels[: k + 1])

    def canonical_key(self):
        """Hashable identity used by the exact-distribution oracle."""
        return self._levels

    def __eq__(self, other) -> bool:
        if not isinstance(other, SimplicialComplex):
            return NotImplemented
        return (
            self.n == other.n and self.r == other.r and self._levels == other._levels
        )

    def __hash__(self) -> int:
        return hash((self.n, self.r, self._levels))

    def __repr__(self) -> str:
        return f"SimplicialComplex(n={self.n}, r={self.r}, f={self.f_vector()})"


# -- face counting ----------------------------------------------------------


def f_vector(Y: SimplicialComplex) -> tuple[int, ...]:
    """Face counts f_0..f_r."""
    return Y.f_vector()


def _candidates_from_levels(
    levels: Sequence[Sequence[tuple[int, ...]]], i: int, n: int
) -> list[tuple[int, ...]]:
    """All i-simplexes whose full boundary lies in the given skeleton.

    For i = 0 the boundary is empty, so every vertex qualifies.  For i >= 1
    candidates extend an (i-1)-face by one vertex larger than its maximum,
    via intersection of the extension sets of its subfaces; each candidate
    is produced exactly once.  Present faces are NOT excluded here.
    """
    if i == 0:
        return [(v,) for v in range(1, n + 1)]
    lower = levels[i - 1] if i - 1 < len(levels) else ()
    if not lower:
        return []
    if i == 1:
        verts = [f[0] for f in lower]
        return [(u, v) for ui, u in enumerate(verts) for v in verts[ui + 1 :]]
    extend: dict[tuple[int, ...], set[int]] = {}
    for face in lower:
        for j in range(i):
            extend.setdefault(face[:j] + face[j + 1 :], set()).add(face[j])
    out = []
    for tau in lower:
        cand: set[int] | None = None
        for j in range(i):
            s = extend.get(tau[:j] + tau[j + 1 :])
            if not s:
                cand = None
                break
            cand = s if cand is None else cand & s
            if not cand:
                cand = None
                break
        if not cand:
            continue
        vmax = tau[-1]
        for v in sorted(cand):
            if v > vmax:
                out.append(tau + (v,))
    out.sort()
    return out


def external_face_list(Y: SimplicialComplex, i: int) -> list[tuple[int, ...]]:
    """External i-faces of Y: absent i-simplexes with full boundary in Y."""
    if i < 0 or i > Y.r:
        return []
    return [t for t in _candidates_from_levels(Y._levels, i, Y.n) if not Y.has_face(t)]


def external_faces(Y: SimplicialComplex) -> tuple[int, ...]:
    """External face counts e_0..e_r.

    e_0 = n - f_0 always (a vertex has empty boundary).  For i >= 1, when
    every lower level 1..i-1 is complete over the present vertices the count
    is C(f_0, i+1) - f_i; otherwise candidates are enumerated explicitly.
    """
    f = Y.f_vector()
    e = [Y.n - f[0]]
    complete_below = True
    for i in range(1, Y.r + 1):
        if complete_below:
            e.append(math.comb(f[0], i + 1) - f[i])
        else:
            e.append(len(external_face_list(Y, i)))
        if f[i] != math.comb(f[0], i + 1):
            complete_below = False
    return tuple(e)


# -- probability mass --------------------------------------------------------


def _as_fractions(p: Sequence) -> list[Fraction]:
    out = []
    for x in p:
        q = Fraction(x)
        if q < 0 or q > 1:
            raise ValueError(f"probability {x} outside [0, 1]")
        out.append(q)
    return out


def probability_mass(Y: SimplicialComplex, p: Sequence) -> Fraction:
    """Exact mass of Y under the per-dimension inclusion law.

    ``p`` has one entry per dimension 0..r; entries are converted to exact
    rationals (floats convert by their binary value).  Python's pow applies
    the 0^0 = 1 convention factor-wise.
    """
    ps = _as_fractions(p)
    if len(ps) != Y.r + 1:
        raise ValueError(f"need {Y.r + 1} probabilities, got {len(ps)}")
    f = Y.f_vector()
    e = external_faces(Y)
    mass = Fraction(1)
    for i in range(Y.r + 1):
        mass *= ps[i] ** f[i]
        mass *= (1 - ps[i]) ** e[i]
    return mass


def log_probability_mass(Y: SimplicialComplex, p: Sequence[float]) -> float:
    """Natural log of the mass; -inf when some factor vanishes."""
    if len(p) != Y.r + 1:
        raise ValueError(f"need {Y.r + 1} probabilities, got {len(p)}")
    f = Y.f_vector()
    e = external_faces(Y)
    total = 0.0
    for i in range(Y.r + 1):
        pi = float(p[i])
        qi = 1.0 - pi
        if f[i]:
            if pi == 0.0:
                return -math.inf
            total += f[i] * math.log(pi)
        if e[i]:
            if qi == 0.0:
                return -math.inf
            total += e[i] * math.log1p(-pi)
    return total


# -- enumeration oracle ------------------------------------------------------


def enumerate_complexes(n: int, r: int) -> Iterator[SimplicialComplex]:
    """Yield every down-closed complex in the sample space, exactly once.

    State-space guard: refuses n > 6 (the count grows doubly exponentially;
    the exact-distribution oracle only needs tiny n, and even n = 6 is only
    feasible for r <= 1).
    """
    if n > ENUMERATION_VERTEX_CAP:
        raise ValueError(
            f"enumeration is capped at n <= {ENUMERATION_VERTEX_CAP} (got n={n})"
        )

    def rec(levels: list[list[tuple[int, ...]]], i: int) -> Iterator[SimplicialComplex]:
        if i > r:
            yield SimplicialComplex(n, r, levels)
            return
        cands = _candidates_from_levels(levels, i, n)
        for mask in range(1 << len(cands)):
            chosen = [cands[t] for t in range(len(cands)) if mask >> t & 1]
            yield from rec(levels + [chosen], i + 1)

    yield from rec([], 0)


# -- validation ---------------------------------------------------------------


def is_valid_complex(Y: SimplicialComplex) -> ValidationReport:
    """Structural check: sortedness, id range, dimension cap, down-closure."""
    problems: list[str] = []
    for i in range(Y.r + 1):
        level = Y.faces(i)
        for face in level:
            if len(face) != i + 1:
                problems.append(f"face {face} stored at dimension {i}")
            if any(a >= b for a, b in zip(face, face[1:])):
                problems.append(f"face {face} is not strictly increasing")
            if face and (face[0] < 1 or face[-1] > Y.n):
                problems.append(f"face {face} has vertex ids outside 1..{Y.n}")
        if list(level) != sorted(set(level)):
            problems.append(f"dimension {i} faces are not sorted and distinct")
        if i > 0:
            for face in level:
                for j in range(i + 1):
                    sub = face[:j] + face[j + 1 :]
                    if not Y.has_face(sub):
                        problems.append(f"missing face {sub} of {face}")
    return ValidationReport(not problems, problems)


# -- serialization ------------------------------------------------------------


def to_json(Y: SimplicialComplex) -> str:
    """JSON form: {"n": n, "r": r, "faces": per-dimension vertex arrays}."""
    return json.dumps(
        {
            "n": Y.n,
            "r": Y.r,
            "faces": [[list(f) for f in Y.faces(i)] for i in range(Y.r + 1)],
        }
    )


def from_json(text: str) -> SimplicialComplex:
    data = json.loads(text)
    levels = [[_as_face(f) for f in level] for level in data["faces"]]
    cx = SimplicialComplex(int(data["n"]), int(data["r"]), [sorted(l) for l in levels])
    report = is_valid_complex(cx)
    if not report.ok:
        raise InvalidComplexError("; ".join(report.problems))
    return cx


def to_text(Y: SimplicialComplex) -> str:
    """Line-oriented form: one face per line, space-separated vertex ids."""
    lines = [" ".join(map(str, f)) for i in range(Y.r + 1) for f in Y.faces(i)]
    return "\n".join(lines) + ("\n" if lines else "")


def from_text(text: str, n: int | None = None, r: int | None = None) -> SimplicialComplex:
    """Parse the line-oriented form; n and r are inferred when omitted."""
    faces = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        faces.append(_as_face(line.split()))
    if n is None:
        n = max((f[-1] for f in faces), default=0)
    if r is None:
        r = max((len(f) - 1 for f in faces), default=0)
    return SimplicialComplex.from_faces(n, r, faces)
