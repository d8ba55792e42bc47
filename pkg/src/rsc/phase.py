"""Closed-form phase functions of the exponent vector.

With inclusion probabilities p_i = n^{-alpha_i}, the linear functionals

    psi_k(a) = sum_i C(k, i) a_i
    tau_k(a) = (k+1) - sum_{i<=k} psi_i(a)
    phi_k(a) = sum_i C(k, i) a_i / (i+1)

control where face numbers, Betti numbers and degrees change behaviour.
The hyperplanes psi_k = 1 partition the nonnegative orthant into open
domains indexed by the critical dimension k: psi_k < 1 < psi_{k+1} (with
k = -1 when psi_0 > 1 and k = r when psi_r < 1).  All classification
happens at the limit exponent; points within tolerance of a hyperplane are
reported as boundary, never as a domain.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Sequence

__all__ = [
    "OnBoundary",
    "PhaseReport",
    "DegreeScale",
    "FaceCountExpectation",
    "psi",
    "tau",
    "phi",
    "gamma",
    "classify",
    "phase_report",
    "d2_subdomain",
    "expected_fd",
    "expected_fd_exact",
    "second_moment_fd",
    "second_moment_fd_exact",
    "degree_scale",
    "phase_slice",
    "is_schedule",
    "alpha_at",
    "alpha_star",
    "probabilities_from_alpha",
    "DEFAULT_TOLERANCE",
]

DEFAULT_TOLERANCE = 1e-9


def _check_alpha(alpha: Sequence[float]) -> tuple[float, ...]:
    a = tuple(float(x) for x in alpha)
    if not a:
        raise ValueError("alpha must have at least one entry")
    if any(x < 0 for x in a):
        raise ValueError("alpha entries must be nonnegative")
    return a


# -- alpha schedules ----------------------------------------------------------


def is_schedule(alpha) -> bool:
    """True for a tabulated schedule: a sequence of (n, vector) pairs."""
    try:
        first = alpha[0]
    except (TypeError, IndexError):
        return False
    return (
        isinstance(first, (tuple, list))
        and len(first) == 2
        and isinstance(first[1], (tuple, list))
    )


def alpha_at(alpha, n: int) -> tuple[float, ...]:
    """Exponent vector in effect at ambient size n (step schedule)."""
    if not is_schedule(alpha):
        return _check_alpha(alpha)
    entries = sorted((int(m), _check_alpha(v)) for m, v in alpha)
    chosen = entries[0][1]
    for m, v in entries:
        if m <= n:
            chosen = v
        else:
            break
    return chosen


def alpha_star(alpha) -> tuple[float, ...]:
    """Terminal exponent vector, the one classification applies to."""
    if not is_schedule(alpha):
        return _check_alpha(alpha)
    entries = sorted((int(m), _check_alpha(v)) for m, v in alpha)
    return entries[-1][1]


def probabilities_from_alpha(alpha, n: int) -> tuple[float, ...]:
    """p_i = n^{-alpha_i}, evaluated in extended precision then clamped."""
    if n < 1:
        raise ValueError("n must be positive")
    import numpy as np

    a = alpha_at(alpha, n)
    ln_n = np.log(np.longdouble(n))
    out = []
    for x in a:
        p = float(np.exp(-np.longdouble(x) * ln_n))
        out.append(min(1.0, max(0.0, p)))
    return tuple(out)


# -- the linear functionals ---------------------------------------------------


def psi(k: int, alpha: Sequence[float]) -> float:
    """sum_i C(k, i) alpha_i (terms with i > k vanish)."""
    a = _check_alpha(alpha)
    if k < 0:
        raise ValueError("k must be nonnegative")
    return sum(math.comb(k, i) * a[i] for i in range(min(k, len(a) - 1) + 1))


def tau(k: int, alpha: Sequence[float]) -> float:
    """(k+1) - sum_{i<=k} psi_i(alpha) = sum_{i<=k} (1 - psi_i(alpha))."""
    return (k + 1) - sum(psi(i, alpha) for i in range(k + 1))


def phi(k: int, alpha: Sequence[float]) -> float:
    """sum_i C(k, i) alpha_i / (i+1); satisfies (k+1) phi_k = sum_{i<=k} psi_i."""
    a = _check_alpha(alpha)
    if k < 0:
        raise ValueError("k must be nonnegative")
    return sum(
        math.comb(k, i) * a[i] / (i + 1) for i in range(min(k, len(a) - 1) + 1)
    )


def gamma(j: int, k: int, alpha: Sequence[float]) -> float:
    """sum_{i=j-1}^{k} C(k-j+1, i-j+1) alpha_i with alpha_{-1} = 0.

    Specializations: gamma_0 = (k+1) phi_k, gamma_1 = psi_k,
    gamma_k = alpha_{k-1} + alpha_k, gamma_{k+1} = alpha_k.
    """
    a = _check_alpha(alpha)
    if not 0 <= j <= k + 1:
        raise ValueError("need 0 <= j <= k+1")
    total = 0.0
    for i in range(max(j - 1, 0), min(k, len(a) - 1) + 1):
        total += math.comb(k - j + 1, i - j + 1) * a[i]
    return total


# -- classification -----------------------------------------------------------


@dataclass(frozen=True)
class OnBoundary:
    """The exponent lies within tolerance of the hyperplane psi_index = 1."""

    index: int


def classify(
    alpha, r: int | None = None, tolerance: float = DEFAULT_TOLERANCE
) -> int | OnBoundary:
    """Critical dimension of the limit exponent, or OnBoundary.

    Returns -1 when psi_0 > 1, r when psi_r < 1, otherwise the unique k
    with psi_k < 1 < psi_{k+1}.  Any psi_i within ``tolerance`` of 1 short
    circuits to OnBoundary(i): the domains are open and no structural claim
    holds on the hyperplanes.
    """
    a = alpha_star(alpha)
    if r is None:
        r = len(a) - 1
    psis = [psi(k, a) for k in range(r + 1)]
    for i, v in enumerate(psis):
        if abs(v - 1.0) <= tolerance:
            return OnBoundary(i)
    if psis[0] > 1.0:
        return -1
    if psis[r] < 1.0:
        return r
    for k in range(r):
        if psis[k] < 1.0 < psis[k + 1]:
            return k
    raise AssertionError("psi is monotone; unreachable")


@dataclass(frozen=True)
class PhaseReport:
    """Everything classification-related at one exponent vector."""

    alpha: tuple[float, ...]
    r: int
    psi: tuple[float, ...]
    tau: tuple[float, ...]
    phi: tuple[float, ...]
    domain: int | OnBoundary
    e_margin: float
    delta: tuple[float, ...]
    tolerance: float

    def to_dict(self) -> dict:
        if isinstance(self.domain, OnBoundary):
            domain = {"kind": "boundary", "index": self.domain.index}
        else:
            domain = {"kind": "domain", "k": self.domain}
        return {
            "alpha": list(self.alpha),
            "r": self.r,
            "psi": list(self.psi),
            "tau": list(self.tau),
            "phi": list(self.phi),
            "domain": domain,
            "e_margin": self.e_margin,
            "delta": list(self.delta),
            "tolerance": self.tolerance,
        }


def phase_report(
    alpha, r: int | None = None, tolerance: float = DEFAULT_TOLERANCE
) -> PhaseReport:
    a = alpha_star(alpha)
    if r is None:
        r = len(a) - 1
    psis = tuple(psi(k, a) for k in range(r + 1))
    taus = tuple(tau(k, a) for k in range(r + 1))
    phis = tuple(phi(k, a) for k in range(r + 1))
    domain = classify(a, r, tolerance)
    if isinstance(domain, OnBoundary):
        margin = 0.0
    elif domain == -1:
        margin = psis[0] - 1.0
    elif domain == r:
        margin = 1.0 - psis[r]
    else:
        margin = min(1.0 - psis[domain], psis[domain + 1] - 1.0)
    delta = tuple(min(taus[0], taus[d]) for d in range(r + 1))
    return PhaseReport(a, r, psis, taus, phis, domain, margin, delta, tolerance)


_D2_SIMPLY_CONNECTED = "simply_connected"
_D2_PERFECT_NONTRIVIAL = "perfect_nontrivial"
_D2_BOUNDARY = "on_boundary"


def d2_subdomain(alpha, tolerance: float = DEFAULT_TOLERANCE) -> str:
    """Split of the critical-dimension-2 domain by alpha_0+3alpha_1+2alpha_2 vs 1.

    Below the split line the fundamental group is trivial
    ("simply_connected"); above it the group is nontrivial but perfect
    ("perfect_nontrivial").  Requires the exponent to classify as domain 2.
    """
    a = alpha_star(alpha)
    k = classify(a, tolerance=tolerance)
    if k != 2:
        raise ValueError(f"exponent classifies as {k!r}, not domain 2")
    padded = a + (0.0,) * max(0, 3 - len(a))
    s = padded[0] + 3 * padded[1] + 2 * padded[2]
    if abs(s - 1.0) <= tolerance:
        return _D2_BOUNDARY
    return _D2_SIMPLY_CONNECTED if s < 1.0 else _D2_PERFECT_NONTRIVIAL


# -- moments ------------------------------------------------------------------


class FaceCountExpectation(NamedTuple):
    """E(f_d) plus the sandwich (1 - d^2/n) n^tau/(d+1)! <= E <= n^tau/(d+1)!."""

    value: float
    lower: float
    upper: float


def expected_fd(n: int, d: int, alpha) -> FaceCountExpectation:
    """Expected d-face count C(n, d+1) n^{tau_d - (d+1)} with sandwich bounds."""
    a = alpha_at(alpha, n)
    t = tau(d, a)
    value = _int_times_exp(math.comb(n, d + 1), (t - (d + 1)) * math.log(n))
    center = math.exp(t * math.log(n) - _log_factorial(d + 1))
    lower = max(0.0, (1.0 - d * d / n)) * center
    return FaceCountExpectation(value, lower, center)


def expected_fd_exact(n: int, d: int, p: Sequence) -> Fraction:
    """Exact E(f_d) = C(n, d+1) prod_i p_i^{C(d+1, i+1)} for rational p."""
    ps = [Fraction(x) for x in p]
    prob = Fraction(1)
    for i in range(min(d, len(ps) - 1) + 1):
        prob *= ps[i] ** math.comb(d + 1, i + 1)
    return math.comb(n, d + 1) * prob


def second_moment_fd(n: int, d: int, alpha) -> float:
    """E(f_d^2) from the pair-containment law, in floating point.

    A pair of d-simplexes sharing j vertices is jointly present with
    probability prod_i p_i^{2 C(d+1, i+1) - C(j, i+1)}.
    """
    a = alpha_at(alpha, n)
    ln_n = math.log(n)
    total = 0.0
    for j in range(d + 2):
        exponent = 0.0
        for i in range(d + 1):
            exponent += (2 * math.comb(d + 1, i + 1) - math.comb(j, i + 1)) * (
                a[i] if i < len(a) else 0.0
            )
        count = (
            math.comb(n, d + 1)
            * math.comb(d + 1, j)
            * math.comb(n - d - 1, d + 1 - j)
        )
        total += _int_times_exp(count, -exponent * ln_n)
    return total


def second_moment_fd_exact(n: int, d: int, p: Sequence) -> Fraction:
    """Exact E(f_d^2) for rational p."""
    ps = [Fraction(x) for x in p]
    total = Fraction(0)
    for j in range(d + 2):
        prob = Fraction(1)
        for i in range(d + 1):
            pi = ps[i] if i < len(ps) else Fraction(1)
            prob *= pi ** (2 * math.comb(d + 1, i + 1) - math.comb(j, i + 1))
        total += (
            math.comb(n, d + 1)
            * math.comb(d + 1, j)
            * math.comb(n - d - 1, d + 1 - j)
            * prob
        )
    return total


class DegreeScale(NamedTuple):
    """lam = n^{-psi_{d+1}}, mu = n * lam, and the link-exact (n-d-1) * lam."""

    lam: float
    mu: float
    mu_prime: float


def degree_scale(n: int, d: int, alpha) -> DegreeScale:
    a = alpha_at(alpha, n)
    if d + 1 > len(a) - 1:
        raise ValueError("need d + 1 <= r")
    lam = math.exp(-psi(d + 1, a) * math.log(n))
    return DegreeScale(lam, n * lam, (n - d - 1) * lam)


# -- phase slices -------------------------------------------------------------


def phase_slice(
    free: tuple[int, int],
    fixed: dict[int, float],
    r: int,
    ranges: tuple[tuple[float, float], tuple[float, float]],
    steps: int,
    tolerance: float = DEFAULT_TOLERANCE,
) -> list[tuple[float, float, str]]:
    """Classify a grid in a 2-plane of exponent space.

    Returns rows (alpha_i, alpha_j, label) where the label is "D<k>" or
    "H<i>" for grid points within tolerance of a hyperplane.  Inside the
    critical-dimension-2 domain the label carries the subdomain split as a
    suffix.
    """
    i, j = free
    if i == j:
        raise ValueError("free coordinates must differ")
    if steps < 2:
        raise ValueError("need at least 2 grid steps")
    base = [0.0] * (r + 1)
    for idx, val in fixed.items():
        if idx in (i, j):
            raise ValueError("fixed coordinate overlaps a free one")
        base[idx] = float(val)
    (lo_i, hi_i), (lo_j, hi_j) = ranges
    rows = []
    for si in range(steps):
        ai = lo_i + (hi_i - lo_i) * si / (steps - 1)
        for sj in range(steps):
            aj = lo_j + (hi_j - lo_j) * sj / (steps - 1)
            a = list(base)
            a[i] = ai
            a[j] = aj
            domain = classify(a, r, tolerance)
            if isinstance(domain, OnBoundary):
                label = f"H{domain.index}"
            else:
                label = f"D{domain}"
                if domain == 2:
                    label += "/" + d2_subdomain(a, tolerance)
            rows.append((ai, aj, label))
    return rows


# -- helpers ------------------------------------------------------------------


def _int_times_exp(count: int, log_scale: float) -> float:
    """count * exp(log_scale) without overflowing the int-to-float cast."""
    if count == 0:
        return 0.0
    if count.bit_length() < 900 and abs(log_scale) < 700.0:
        return float(count) * math.exp(log_scale)
    return math.exp(math.log(count) + log_scale)


def _log_factorial(k: int) -> float:
    return float(math.lgamma(k + 1))
