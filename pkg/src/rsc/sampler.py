"""Level-wise sampling of random complexes under the inclusion law.

Each level i retains, independently with probability p_i, every i-simplex
whose full boundary survived the previous levels.  Decisions are driven by
a counter-based generator keyed by (seed, dimension, vertex tuple), so a
face's draw is independent of evaluation order and shared across parameter
values: raising any p_i yields a superset complex ("keyed" strategy).

When a level's candidate set is combinatorially implicit (every lower level
is complete over the present vertices, which is automatic for edges and
holds whenever the intermediate probabilities equal 1) and too large to
sweep face by face, the sampler switches to geometric-gap skip sampling
over the lexicographically ranked candidates ("skip" strategy).  The
product law is identical; per-face draw identity and the monotone coupling
are properties of the keyed path only.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

from . import _kernels as kernels
from . import phase
from .model import SimplicialComplex, _candidates_from_levels

__all__ = [
    "SampleSpec",
    "sample",
    "candidate_faces",
    "unrank_combination",
    "DEFAULT_SKIP_THRESHOLD",
]

DEFAULT_SKIP_THRESHOLD = 200_000

_STRATEGIES = ("auto", "keyed", "skip")


def _default_seed() -> int:
    return int(os.environ.get("RSC_SEED", "0"))


@dataclass(frozen=True)
class SampleSpec:
    """Deterministic description of one draw: (n, r, probabilities, seed)."""

    n: int
    r: int
    p: tuple | None = None
    alpha: tuple | None = None
    seed: int = field(default_factory=_default_seed)
    strategy: str = "auto"
    skip_threshold: int = DEFAULT_SKIP_THRESHOLD

    def __post_init__(self):
        if self.n < 0 or self.r < 0:
            raise ValueError("n and r must be nonnegative")
        if (self.p is None) == (self.alpha is None):
            raise ValueError("exactly one of p and alpha must be given")
        if self.strategy not in _STRATEGIES:
            raise ValueError(f"strategy must be one of {_STRATEGIES}")
        if self.p is not None:
            object.__setattr__(self, "p", tuple(self.p))
            if len(self.p) != self.r + 1:
                raise ValueError(f"need {self.r + 1} probabilities")
            if any(not 0 <= float(x) <= 1 for x in self.p):
                raise ValueError("probabilities must lie in [0, 1]")
        else:
            frozen = (
                tuple((int(m), tuple(v)) for m, v in self.alpha)
                if phase.is_schedule(self.alpha)
                else tuple(self.alpha)
            )
            object.__setattr__(self, "alpha", frozen)
            if len(phase.alpha_at(self.alpha, max(self.n, 1))) != self.r + 1:
                raise ValueError(f"need {self.r + 1} exponents")

    def probabilities(self) -> tuple[float, ...]:
        """Per-dimension inclusion probabilities as floats."""
        if self.p is not None:
            return tuple(float(x) for x in self.p)
        return phase.probabilities_from_alpha(self.alpha, max(self.n, 1))


def sample(spec: SampleSpec) -> SimplicialComplex:
    """Draw one complex; identical specs give bit-identical complexes."""
    probs = spec.probabilities()
    levels: list[list[tuple[int, ...]]] = []
    implicit = True  # levels 1..i-1 complete over the present vertices so far
    verts: tuple[int, ...] = ()
    for i in range(spec.r + 1):
        p = probs[i]
        if i == 0:
            pool = tuple(range(1, spec.n + 1))
        elif implicit:
            pool = verts
        else:
            pool = ()
        if implicit:
            kept = _sample_implicit_level(spec, i, pool, p)
        else:
            cands = _candidates_from_levels(levels, i, spec.n)
            kept = _sample_explicit_level(spec, i, cands, p)
        levels.append(kept)
        if i == 0:
            verts = tuple(t[0] for t in kept)
        elif i >= 1 and p != 1.0:
            implicit = False
    return SimplicialComplex(spec.n, spec.r, levels)


def candidate_faces(Y: SimplicialComplex, i: int) -> list[tuple[int, ...]]:
    """External i-faces of Y, each produced exactly once.

    These are precisely the candidates the level-i sweep would decide given
    the faces of dimension < i, minus any already present.
    """
    if i < 0 or i > Y.r:
        return []
    return [
        t
        for t in _candidates_from_levels(Y._levels, i, Y.n)
        if not Y.has_face(t)
    ]


# -- level strategies ---------------------------------------------------------


def _sample_implicit_level(
    spec: SampleSpec, i: int, pool: Sequence[int], p: float
) -> list[tuple[int, ...]]:
    k = i + 1
    m = len(pool)
    if p <= 0.0 or m < k:
        return []
    if p >= 1.0:
        return [tuple(c) for c in combinations(pool, k)]
    count = math.comb(m, k)
    use_skip = spec.strategy == "skip" or (
        spec.strategy == "auto" and count > spec.skip_threshold
    )
    if use_skip:
        return _skip_sweep(spec.seed, i, count, p, lambda t: unrank_combination(pool, k, t))
    return kernels.sample_implicit(spec.seed, i, pool, k, p)


def _sample_explicit_level(
    spec: SampleSpec, i: int, cands: list[tuple[int, ...]], p: float
) -> list[tuple[int, ...]]:
    if p <= 0.0 or not cands:
        return []
    if p >= 1.0:
        return list(cands)
    if spec.strategy == "skip":
        return _skip_sweep(spec.seed, i, len(cands), p, cands.__getitem__)
    return [t for t in cands if kernels.keyed_u01(spec.seed, i, t) < p]


def _skip_sweep(seed: int, dim: int, count: int, p: float, take) -> list:
    """Bernoulli(p) over ``count`` ordered candidates via geometric gaps."""
    kept = []
    ln_q = math.log1p(-p)
    idx = -1
    t = 0
    while True:
        u = kernels.stream_u01(seed, dim, t)
        t += 1
        if u <= 0.0:
            u = 2.0 ** -53
        idx += int(math.log(u) / ln_q) + 1
        if idx >= count:
            break
        kept.append(take(idx))
    return kept


# -- combination unranking ------------------------------------------------------


def unrank_combination(pool: Sequence[int], k: int, rank: int) -> tuple[int, ...]:
    """The rank-th k-subset of ``pool`` in lexicographic order.

    ``pool`` must be sorted; ranks run from 0 to C(len(pool), k) - 1.
    """
    m = len(pool)
    if not 0 <= rank < math.comb(m, k):
        raise ValueError("rank out of range")
    if k == 1:
        return (pool[rank],)
    if k == 2:
        a = _first_of_pair(m, rank)
        b = rank - (a * (2 * m - a - 1)) // 2 + a + 1
        return (pool[a], pool[b])
    out = []
    start = 0
    for pos in range(k):
        rem = k - pos - 1
        if rem == 0:
            out.append(pool[start + rank])
            break
        total = math.comb(m - start, rem + 1)
        lo, hi = start, m - 1 - rem
        # largest index t with (number of combos whose first index < t) <= rank
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if total - math.comb(m - mid, rem + 1) <= rank:
                lo = mid
            else:
                hi = mid - 1
        rank -= total - math.comb(m - lo, rem + 1)
        out.append(pool[lo])
        start = lo + 1
    return tuple(out)


def _first_of_pair(m: int, rank: int) -> int:
    """First index a of the rank-th pair (a < b) over m items, lex order."""
    # block of pairs starting at a has size m-1-a; cumulative before a is
    # a*(2m-a-1)/2.  Solve by integer sqrt, then fix up.
    a = int((2 * m - 1 - math.isqrt((2 * m - 1) * (2 * m - 1) - 8 * rank)) // 2)
    while a > 0 and (a * (2 * m - a - 1)) // 2 > rank:
        a -= 1
    while ((a + 1) * (2 * m - a - 2)) // 2 <= rank:
        a += 1
    return a
