"""Kernel backend selection.

The compiled extension is preferred when present; the numpy fallback keeps
the package fully functional without it. ``MVF_BACKEND`` forces the choice:
``cython`` fails loudly if the extension is missing, ``python`` skips it.
"""

import os

from . import _pykernels

_requested = os.environ.get("MVF_BACKEND", "auto").strip().lower()

if _requested in ("auto", "", "cython", "fast"):
    try:
        from . import _fastkernels as _impl
    except ImportError:
        if _requested in ("cython", "fast"):
            raise ImportError(
                "MVF_BACKEND=cython requested but the compiled extension "
                "is not available; build it or unset MVF_BACKEND"
            )
        _impl = _pykernels
elif _requested in ("python", "numpy"):
    _impl = _pykernels
else:
    raise ImportError(f"unknown MVF_BACKEND value: {_requested!r}")

BACKEND_NAME = _impl.NAME

_k_eigh = _impl.eigh
_k_qr = _impl.qr
_k_ldu = _impl.ldu
_k_cholesky = _impl.cholesky

import numpy as np


def _cc(a):
    a = np.ascontiguousarray(a, dtype=np.float64)
    # read-only views (e.g. frozen sample arrays) cannot back a typed
    # memoryview in the compiled kernels
    if not a.flags.writeable:
        a = a.copy()
    return a


def eigh(a):
    """Eigendecomposition of a symmetric matrix: ascending w, columns V."""
    w, v = _k_eigh(_cc(a))
    return np.asarray(w), np.asarray(v)


def qr(a):
    """Square QR with no sign convention on diag(R)."""
    q, r = _k_qr(_cc(a))
    return np.asarray(q), np.asarray(r)


def ldu(a, tau):
    """Unit-lower/diagonal/unit-upper elimination; status flags tiny minors."""
    lo, d, up, status = _k_ldu(_cc(a), float(tau))
    return np.asarray(lo), np.asarray(d), np.asarray(up), status


def cholesky(a):
    """Lower Cholesky factor with a failing-pivot status."""
    lo, status = _k_cholesky(_cc(a))
    return np.asarray(lo), status
