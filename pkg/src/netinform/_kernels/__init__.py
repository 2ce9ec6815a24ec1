"""Hot-loop kernels: compiled extension with a pure-Python fallback.

The compiled module is selected at import time unless NETINFORM_PURE_PYTHON
is set to a truthy value or the extension failed to build.
"""

import os

import numpy as np

from . import pure

if os.environ.get("NETINFORM_PURE_PYTHON", "") not in ("", "0"):
    _impl = pure
    BACKEND = "pure"
else:
    try:
        from . import _core as _impl  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:
        _impl = pure
        BACKEND = "pure"


def ss_sim(A, B, C, D, u, x0=None):
    """Simulate y(t) = C x(t) + D u(t), x(t+1) = A x(t) + B u(t).

    u has shape (T, m); returns y with shape (T, p).
    """
    A = np.ascontiguousarray(A, dtype=float)
    B = np.ascontiguousarray(B, dtype=float)
    C = np.ascontiguousarray(C, dtype=float)
    D = np.ascontiguousarray(D, dtype=float)
    u = np.ascontiguousarray(u, dtype=float)
    n = A.shape[0]
    if x0 is None:
        x0 = np.zeros(n)
    x0 = np.ascontiguousarray(x0, dtype=float)
    if u.ndim != 2:
        raise ValueError("u must be (T, m)")
    return _impl.ss_sim(A, B, C, D, u, x0)
