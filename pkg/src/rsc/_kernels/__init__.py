"""Kernel backend selection.

Prefers the compiled Cython extension and falls back to the pure-Python
implementation.  Set RSC_PURE=1 to force the fallback (used by the
benchmark and the backend-equivalence tests).
"""

import os

from . import pure

if os.environ.get("RSC_PURE"):
    _impl = pure
else:
    try:
        from . import _fast as _impl  # type: ignore[attr-defined]
    except ImportError:
        _impl = pure

keyed_u01 = _impl.keyed_u01
stream_u01 = _impl.stream_u01
derive_seed = _impl.derive_seed
sample_implicit = _impl.sample_implicit
rank_mod_p = _impl.rank_mod_p
jacobi_eigenvalues = _impl.jacobi_eigenvalues


def backend() -> str:
    """Name of the active kernel backend ("compiled" or "pure")."""
    return _impl.BACKEND
