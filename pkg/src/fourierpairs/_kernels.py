"""Row-elimination kernels with selectable backend.

The null-space solve spends nearly all of its time in Gaussian elimination
of a dense complex matrix.  Two interchangeable implementations exist:

* a numba-jitted triple loop (default when numba imports cleanly), and
* a vectorized numpy fallback using outer-product updates.

Both apply the same pivot rule (scan columns left to right, pick the row
of largest modulus at or below the current row, skip the column when that
modulus is at most tol), so they produce the same pivot-column list and,
up to floating-point reassociation in the rank-1 update, the same echelon
form.  Selection is via the FOURIERPAIRS_BACKEND environment variable:
"numba", "numpy", or "auto" (the default).
"""

from __future__ import annotations

import os

import numpy as np

__all__ = ["eliminate_in_place", "active_backend", "eliminate_with_backend"]

_ENV_VAR = "FOURIERPAIRS_BACKEND"


def _eliminate_loops(a, tol):
    rows, cols = a.shape
    piv_cols = np.empty(min(rows, cols), dtype=np.int64)
    npiv = 0
    cur = 0
    for col in range(cols):
        if cur == rows:
            break
        best = cur
        bestval = abs(a[cur, col])
        for r in range(cur + 1, rows):
            v = abs(a[r, col])
            if v > bestval:
                bestval = v
                best = r
        if bestval <= tol:
            continue
        if best != cur:
            for j in range(col, cols):
                tmp = a[cur, j]
                a[cur, j] = a[best, j]
                a[best, j] = tmp
        for r in range(cur + 1, rows):
            f = a[r, col] / a[cur, col]
            if f != 0:
                a[r, col] = 0
                for j in range(col + 1, cols):
                    a[r, j] = a[r, j] - f * a[cur, j]
        piv_cols[npiv] = col
        npiv += 1
        cur += 1
    return piv_cols[:npiv]


def _eliminate_numpy(a: np.ndarray, tol: float) -> np.ndarray:
    rows, cols = a.shape
    piv_cols = []
    cur = 0
    for col in range(cols):
        if cur == rows:
            break
        sub = np.abs(a[cur:, col])
        best = cur + int(np.argmax(sub))
        if sub[best - cur] <= tol:
            continue
        if best != cur:
            a[[cur, best], col:] = a[[best, cur], col:]
        factors = a[cur + 1 :, col] / a[cur, col]
        a[cur + 1 :, col] = 0
        if col + 1 < cols:
            a[cur + 1 :, col + 1 :] -= np.outer(factors, a[cur, col + 1 :])
        piv_cols.append(col)
        cur += 1
    return np.array(piv_cols, dtype=np.int64)


def _resolve_backend() -> tuple[str, object]:
    requested = os.environ.get(_ENV_VAR, "auto").strip().lower()
    if requested not in ("auto", "numba", "numpy"):
        raise ValueError(
            f"{_ENV_VAR} must be 'auto', 'numba', or 'numpy', got {requested!r}"
        )
    if requested == "numpy":
        return "numpy", _eliminate_numpy
    try:
        from numba import njit
    except ImportError:
        if requested == "numba":
            raise ImportError(
                f"{_ENV_VAR}=numba requested but numba is not importable"
            ) from None
        return "numpy", _eliminate_numpy
    return "numba", njit(cache=True)(_eliminate_loops)


_BACKEND_NAME, _ELIMINATE = _resolve_backend()


def active_backend() -> str:
    """Name of the elimination backend selected at import time."""
    return _BACKEND_NAME


def eliminate_in_place(a: np.ndarray, tol: float) -> np.ndarray:
    """Reduce a (complex128, C-contiguous) to row echelon form in place.

    Returns the pivot columns in ascending order.  Entries below each
    pivot are set to exact zero; no row scaling is applied.
    """
    if a.dtype != np.complex128 or not a.flags.c_contiguous:
        raise ValueError("matrix must be C-contiguous complex128")
    return _ELIMINATE(a, float(tol))


_numba_fn = _ELIMINATE if _BACKEND_NAME == "numba" else None


def eliminate_with_backend(a: np.ndarray, tol: float, backend: str) -> np.ndarray:
    """Run one specific implementation, regardless of the env selection.

    Exists for the backend-agreement tests and the benchmark script.
    """
    global _numba_fn
    if backend == "numpy":
        return _eliminate_numpy(a, float(tol))
    if backend == "numba":
        if _numba_fn is None:
            from numba import njit

            _numba_fn = njit(cache=True)(_eliminate_loops)
        return _numba_fn(a, float(tol))
    raise ValueError(f"unknown backend {backend!r}")
