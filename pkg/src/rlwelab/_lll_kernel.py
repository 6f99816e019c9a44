"""Float-GSO LLL kernel, JIT-compiled with numba.

Works on an int64 basis in place; only the Gram-Schmidt data is floating
point, so every row operation is an exact unimodular integer transform and
the spanned lattice can never silently change.  Quality of the output is
certified (and repaired if needed) by the exact integer engine in
``lattice``; this kernel exists purely for speed at attack dimensions.

Status codes:
    0   converged
    -2  iteration budget exhausted
    -3  a row update would risk int64 overflow (update not applied)
    -4  size reduction failed to settle (float pathology)
    -5  a projected norm collapsed (dependent rows or severe cancellation)
"""

from __future__ import annotations

import numpy as np

try:
    import numba

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None
    _HAVE_NUMBA = False

STATUS_OK = 0
STATUS_BUDGET = -2
STATUS_OVERFLOW = -3
STATUS_NO_SETTLE = -4
STATUS_COLLAPSE = -5

# row updates keep |entry| below this; far above anything attack lattices hit
_ENTRY_LIMIT = float(2**61)


def _kernel_impl(B, delta, max_iters):  # pragma: no cover - compiled path
    n, m = B.shape
    mu = np.zeros((n, n))
    bstar = np.zeros((n, m))
    norms = np.zeros(n)

    bstar[0] = B[0].astype(np.float64)
    norms[0] = np.dot(bstar[0], bstar[0])
    mu[0, 0] = 1.0

    k = 1
    iters = 0
    while k < n:
        iters += 1
        if iters > max_iters:
            return STATUS_BUDGET, iters

        settled = False
        for _ in range(16):
            # fresh GSO of row k against the fixed rows below it
            v = B[k].astype(np.float64)
            for j in range(k):
                if norms[j] <= 1e-9:
                    return STATUS_COLLAPSE, iters
                mu[k, j] = np.dot(v, bstar[j]) / norms[j]
                v -= mu[k, j] * bstar[j]
            mu[k, k] = 1.0

            reduced = False
            for j in range(k - 1, -1, -1):
                if abs(mu[k, j]) > 0.5:
                    r = np.floor(mu[k, j] + 0.5)
                    max_j = 0.0
                    max_k = 0.0
                    for t in range(m):
                        aj = abs(float(B[j, t]))
                        ak = abs(float(B[k, t]))
                        if aj > max_j:
                            max_j = aj
                        if ak > max_k:
                            max_k = ak
                    if abs(r) * max_j + max_k > _ENTRY_LIMIT:
                        return STATUS_OVERFLOW, iters
                    ri = np.int64(r)
                    for t in range(m):
                        B[k, t] -= ri * B[j, t]
                    for l in range(j + 1):
                        mu[k, l] -= r * mu[j, l]
                    reduced = True
            if not reduced:
                settled = True
                break
        if not settled:
            return STATUS_NO_SETTLE, iters

        bstar[k] = v
        norms[k] = np.dot(v, v)
        if norms[k] <= 1e-9:
            return STATUS_COLLAPSE, iters

        if norms[k] >= (delta - mu[k, k - 1] ** 2) * norms[k - 1]:
            k += 1
        else:
            for t in range(m):
                tmp = B[k, t]
                B[k, t] = B[k - 1, t]
                B[k - 1, t] = tmp
            k = max(k - 1, 1)
            if k == 1:
                bstar[0] = B[0].astype(np.float64)
                norms[0] = np.dot(bstar[0], bstar[0])
    return STATUS_OK, iters


if _HAVE_NUMBA:
    _kernel = numba.njit("Tuple((int64, int64))(int64[:, ::1], float64, int64)", cache=True)(
        _kernel_impl
    )
else:  # pragma: no cover
    _kernel = None


def kernel_available() -> bool:
    return _kernel is not None


def run(B: np.ndarray, delta: float, max_iters: int):
    """Reduce int64 matrix B in place. Returns (status, iterations)."""
    if _kernel is None:  # pragma: no cover
        raise RuntimeError("numba kernel unavailable")
    return _kernel(B, float(delta), int(max_iters))
