"""Pure-Python fallback for the simulation kernel.

Same contract as the compiled version; used when the extension is not built
or when NETINFORM_PURE_PYTHON=1.
"""

import numpy as np


def ss_sim(A, B, C, D, u, x0):
    A = np.ascontiguousarray(A, dtype=float)
    B = np.ascontiguousarray(B, dtype=float)
    C = np.ascontiguousarray(C, dtype=float)
    D = np.ascontiguousarray(D, dtype=float)
    u = np.ascontiguousarray(u, dtype=float)
    T = u.shape[0]
    p = C.shape[0]
    y = np.empty((T, p))
    x = np.array(x0, dtype=float, copy=True)
    for t in range(T):
        ut = u[t]
        y[t] = C @ x + D @ ut
        x = A @ x + B @ ut
    return y
