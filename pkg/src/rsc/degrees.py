"""Face degrees, degree histograms, their expectations, and purity.

The degree of a d-face is its number of (d+1)-cofaces.  Below the critical
dimension degrees concentrate around mu = n^{1 - psi_{d+1}(alpha)}; at or
above it almost all faces are isolated (degree 0).  The histogram counts
f_{d,s} satisfy sum_s f_{d,s} = f_d, and in expectation

    E(f_{d,s}) = C(n-d-1, s) lam^s (1-lam)^{n-d-1-s} * E(f_d),
    lam = n^{-psi_{d+1}(alpha)}.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from .model import SimplicialComplex
from .phase import alpha_at, degree_scale, expected_fd, psi

__all__ = [
    "DegreeHistogram",
    "ConcentrationReport",
    "degree",
    "degree_histogram",
    "lambda_weight",
    "expected_fds",
    "concentration_report",
    "isolated_fraction",
    "purity_check",
]


def degree(Y: SimplicialComplex, sigma) -> int:
    """Number of (d+1)-faces of Y containing the d-face sigma."""
    s = tuple(sigma)
    if not Y.has_face(s):
        raise ValueError(f"{s} is not a face of the complex")
    d = len(s) - 1
    if d + 1 > Y.r:
        return 0
    count = 0
    sset = set(s)
    for face in Y.faces(d + 1):
        if sset.issubset(face):
            count += 1
    return count


@dataclass(frozen=True)
class DegreeHistogram:
    """Sparse counts {degree s: number of d-faces with that degree}."""

    d: int
    counts: dict[int, int]
    total: int

    def fraction(self, s: int) -> float:
        return self.counts.get(s, 0) / self.total if self.total else 0.0


def degree_histogram(Y: SimplicialComplex, d: int) -> DegreeHistogram:
    """Exact histogram of d-face degrees; counts sum to f_d."""
    if d < 0 or d > Y.r:
        raise ValueError(f"need 0 <= d <= {Y.r}")
    deg = {face: 0 for face in Y.faces(d)}
    for face in Y.faces(d + 1) if d + 1 <= Y.r else ():
        for t in range(d + 2):
            deg[face[:t] + face[t + 1 :]] += 1
    counts: dict[int, int] = {}
    for s in deg.values():
        counts[s] = counts.get(s, 0) + 1
    return DegreeHistogram(d, counts, len(deg))


def lambda_weight(n: int, d: int, s: int, alpha) -> float:
    """Binomial weight C(n-d-1, s) lam^s (1-lam)^{n-d-1-s}."""
    a = alpha_at(alpha, n)
    trials = n - d - 1
    if not 0 <= s <= trials:
        return 0.0
    lam = math.exp(-psi(d + 1, a) * math.log(n))
    if lam >= 1.0:
        return 1.0 if s == trials else 0.0
    if lam <= 0.0:
        return 1.0 if s == 0 else 0.0
    log_w = (
        _log_comb(trials, s) + s * math.log(lam) + (trials - s) * math.log1p(-lam)
    )
    return math.exp(log_w)


def expected_fds(n: int, d: int, s: int, alpha) -> float:
    """E(f_{d,s}): the binomial weight times E(f_d)."""
    r = len(alpha_at(alpha, n)) - 1
    if d + 1 > r:
        raise ValueError("need d + 1 <= r")
    if not 0 <= s <= n - d - 1:
        raise ValueError("need 0 <= s <= n - d - 1")
    return lambda_weight(n, d, s, alpha) * expected_fd(n, d, alpha).value


class ConcentrationReport(NamedTuple):
    """How many d-face degrees fall outside the band |s - mu| <= delta*mu."""

    mu: float
    mu_prime: float
    total: int
    out_of_band: int
    fraction_out: float


def concentration_report(
    Y: SimplicialComplex, d: int, delta: float, alpha
) -> ConcentrationReport:
    """Band check around mu = n^{1 - psi_{d+1}(alpha)}.

    Below the critical dimension the model predicts every d-face inside the
    band asymptotically; the banding uses mu (the stated scale), with the
    link-exact mu' reported alongside.
    """
    if not 0 < delta < 1:
        raise ValueError("need 0 < delta < 1")
    scale = degree_scale(Y.n, d, alpha)
    hist = degree_histogram(Y, d)
    out = sum(
        count
        for s, count in hist.counts.items()
        if abs(s - scale.mu) > delta * scale.mu
    )
    frac = out / hist.total if hist.total else 0.0
    return ConcentrationReport(scale.mu, scale.mu_prime, hist.total, out, frac)


def isolated_fraction(Y: SimplicialComplex, d: int) -> float | None:
    """f_{d,0} / f_d, or None when there are no d-faces."""
    hist = degree_histogram(Y, d)
    if hist.total == 0:
        return None
    return hist.counts.get(0, 0) / hist.total


def purity_check(Y: SimplicialComplex, k: int) -> bool:
    """True iff the k-skeleton has no degree-zero faces below dimension k."""
    sk = Y.skeleton(k)
    for d in range(min(k, sk.r)):
        hist = degree_histogram(sk, d)
        if hist.counts.get(0, 0):
            return False
    return True


def _log_comb(n: int, k: int) -> float:
    if k < 0 or k > n:
        return -math.inf
    return float(math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1))
