"""Signals on Z_N that vanish, together with their transform, near zero.

A signal f supported outside the zero window whose transform also vanishes
on the zero window is a null vector of the homogeneous linear system

    rows:    one per zero-window residue m (ascending),
    columns: one per residue k outside the window, k = R+1 .. N-R-1,
    entry:   (1/N) * exp(-2 pi i m k / N),

with R = N // 10.  The system has about N/5 rows and 4N/5 columns, so null
vectors exist in abundance; the solver picks one deterministically by
Gaussian elimination with partial pivoting followed by back substitution
with a single free column seeded to 1 (all other free columns 0).  The
leading block is Vandermonde-like on a short arc of the unit circle and is
violently ill-conditioned, but partial-pivoted elimination is backward
stable, so the *residual* of the computed vector stays at machine scale
even when the vector itself is far from any exact null vector.  That is
the only property downstream code relies on.

Support spread: with columns scanned in natural order the pivot block is
the leftmost fifth of the matrix, and the computed vector's significant
entries (the ill-conditioned triangle concentrates all magnitude on the
pivot coordinates) cluster on one narrow residue band, leaving most of
the period numerically empty.  The solver therefore scans columns in a
deterministic interleaved order with stride about cols/rows, which places
the pivot columns, and with them the surviving support, roughly uniformly
across the admissible residues.  The choice of scan order only selects
which null vector is returned; the vanishing properties are checked the
same way regardless.

Determinism: pivoting scans the interleaved column order and takes the
first row of maximal modulus, ties broken by lowest row index; the free
column is seeded to exactly 1; the result is normalized by its entry of
largest modulus (first such index on ties), making that entry exactly
1+0j.  Same input, same backend, same bits out.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._kernels import eliminate_in_place
from .cyclic import CyclicSignal, ZeroWindow, dft, zero_window

__all__ = [
    "VanishingSystem",
    "build_system",
    "nullspace_vector",
    "solve_vanishing",
    "SolverError",
    "spectral_residual",
]

# Magnitude at which back substitution rescales the partial solution; the
# system is homogeneous, so scaling is free, and this keeps the recurrence
# clear of overflow for badly conditioned upper triangles.
_RESCALE_LIMIT = 1e100


class SolverError(RuntimeError):
    """No candidate free column produced an acceptable residual."""

    def __init__(self, message: str, best_residual: float):
        super().__init__(message)
        self.best_residual = best_residual


@dataclass(frozen=True, eq=False)
class VanishingSystem:
    """Constraint matrix tying window residues to outside-window values."""

    modulus: int
    window: ZeroWindow
    row_residues: np.ndarray
    col_residues: np.ndarray
    matrix: np.ndarray

    @property
    def shape(self) -> tuple[int, int]:
        return self.matrix.shape


def build_system(modulus: int) -> VanishingSystem:
    win = zero_window(modulus)
    rows = win.residues()
    radius = win.radius
    cols = np.arange(radius + 1, modulus - radius, dtype=np.int64)
    phase = np.outer(rows, cols).astype(np.float64)
    matrix = np.exp(-2j * np.pi * phase / modulus) / modulus
    matrix = np.ascontiguousarray(matrix, dtype=np.complex128)
    return VanishingSystem(
        modulus=modulus,
        window=win,
        row_residues=rows,
        col_residues=cols,
        matrix=matrix,
    )


def _interleave(n_cols: int, n_rows: int) -> np.ndarray:
    """Column scan order: stride passes so early pivots spread evenly."""
    stride = max(1, round(n_cols / max(1, n_rows)))
    order = [c for start in range(stride) for c in range(start, n_cols, stride)]
    return np.array(order, dtype=np.int64)


def _back_substitute(
    echelon: np.ndarray,
    piv_cols: np.ndarray,
    free_cols: np.ndarray,
    seed_col: int,
) -> np.ndarray:
    cols = echelon.shape[1]
    x = np.zeros(cols, dtype=np.complex128)
    x[seed_col] = 1.0
    for i in range(len(piv_cols) - 1, -1, -1):
        pc = int(piv_cols[i])
        s = echelon[i, pc + 1 :] @ x[pc + 1 :]
        x[pc] = -s / echelon[i, pc]
        m = np.abs(x[pc])
        if m > _RESCALE_LIMIT:
            x /= m
    return x


def _eliminated(
    system: VanishingSystem,
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Echelon form of the column-interleaved matrix.

    Returns (echelon, pivot columns, free columns, scan order); all column
    indices refer to the interleaved order, natural index = order[j].
    """
    order = _interleave(system.matrix.shape[1], system.matrix.shape[0])
    a = np.ascontiguousarray(system.matrix[:, order])
    tol = np.finfo(np.float64).eps * max(a.shape) * float(np.max(np.abs(a)))
    piv_cols = eliminate_in_place(a, tol)
    piv_set = set(int(c) for c in piv_cols)
    free_cols = np.array(
        [c for c in range(a.shape[1]) if c not in piv_set], dtype=np.int64
    )
    return a, piv_cols, free_cols, order


def _solution_from(
    echelon: np.ndarray,
    piv_cols: np.ndarray,
    free_cols: np.ndarray,
    order: np.ndarray,
    seed: int,
) -> np.ndarray:
    x = _back_substitute(echelon, piv_cols, free_cols, seed)
    natural = np.empty_like(x)
    natural[order] = x
    top = int(np.argmax(np.abs(natural)))
    return natural / natural[top]


def nullspace_vector(
    system: VanishingSystem,
    free_index: int = -1,
) -> np.ndarray:
    """One deterministic null vector of the constraint matrix.

    free_index selects which free column is seeded, counted from the end
    of the free-column list in scan order (the default -1 is the last
    scanned).  The result is indexed like the system's columns and
    normalized so its largest-modulus entry is exactly 1+0j.
    """
    echelon, piv_cols, free_cols, order = _eliminated(system)
    if free_cols.size == 0:
        raise SolverError("constraint matrix has no free columns", float("inf"))
    seed = int(free_cols[free_index])
    return _solution_from(echelon, piv_cols, free_cols, order, seed)


def spectral_residual(signal: CyclicSignal, window: ZeroWindow) -> float:
    """Largest transform magnitude over the zero window."""
    spectrum = dft(signal).values
    return float(np.max(np.abs(spectrum[window.residues()])))


def _assemble(system: VanishingSystem, x: np.ndarray) -> CyclicSignal:
    values = np.zeros(system.modulus, dtype=np.complex128)
    values[system.col_residues] = x
    return CyclicSignal(values)


def solve_vanishing(
    modulus: int,
    residual_tol: float = 1e-9,
) -> CyclicSignal:
    """Nonzero signal with exact zeros on the zero window and transform
    magnitude at most residual_tol * max|f| there.

    The signal's window entries are assembled as literal zeros, never
    computed, so that side of the vanishing claim is exact.  The spectral
    side is checked a posteriori; if the default free column fails the
    tolerance, the next free columns (right to left) are tried, reusing
    the one elimination and redoing only back substitution.  Raises
    SolverError with the best residual seen if every candidate fails.
    """
    system = build_system(modulus)
    echelon, piv_cols, free_cols, order = _eliminated(system)
    if free_cols.size == 0:
        raise SolverError("constraint matrix has no free columns", float("inf"))
    n_rows, n_cols = system.shape
    attempts = min(free_cols.size, max(1, n_cols - n_rows))
    best = float("inf")
    for i in range(attempts):
        x = _solution_from(
            echelon, piv_cols, free_cols, order, int(free_cols[-1 - i])
        )
        signal = _assemble(system, x)
        resid = spectral_residual(signal, system.window)
        if resid <= residual_tol * signal.max_abs():
            return signal
        best = min(best, resid)
    raise SolverError(
        f"no free column reached residual tolerance {residual_tol:g} "
        f"for modulus {modulus} (best {best:.3e})",
        best,
    )
