"""Multi-parameter random simplicial complexes.

Sampling under the per-dimension inclusion law, phase classification of the
exponent vector, rational homology, link spectral gaps, degree statistics,
cycle-size bounds, and a reproducible ensemble-experiment harness.
"""

from ._kernels import backend
from .model import (
    SimplicialComplex,
    InvalidComplexError,
    enumerate_complexes,
    external_faces,
    f_vector,
    is_valid_complex,
    log_probability_mass,
    probability_mass,
)
from .phase import OnBoundary, PhaseReport, classify, phase_report
from .sampler import SampleSpec, sample
from .homology import BettiVector, betti, connected_components, morse_check

__version__ = "0.1.0"

__all__ = [
    "SimplicialComplex",
    "InvalidComplexError",
    "enumerate_complexes",
    "external_faces",
    "f_vector",
    "is_valid_complex",
    "probability_mass",
    "log_probability_mass",
    "OnBoundary",
    "PhaseReport",
    "classify",
    "phase_report",
    "SampleSpec",
    "sample",
    "BettiVector",
    "betti",
    "connected_components",
    "morse_check",
    "backend",
    "__version__",
]
