"""Fourier analysis on the cyclic group Z_N.

Transform convention used throughout the package:

    hat f(n) = (1/N) * sum_{k=0}^{N-1} f(k) exp(-2 pi i n k / N),

so the inverse transform carries no prefactor and hat-hat gives the
reflection f(-k).  This matches the continuous kernel exp(-2 pi i x xi)
once a signal is lifted to a measure on a lattice of covolume 1/N.

centered_rep maps a residue to its representative in [-N/2, N/2), with the
tie N/2 for even N going to -N/2.  The zero window of modulus N collects
the residues within N/10 of zero in that centered sense; signals vanishing
there are the raw material for measures with a central spectral gap.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "centered_rep",
    "ZeroWindow",
    "zero_window",
    "CyclicSignal",
    "dft",
    "idft",
    "dft_naive",
]


def centered_rep(x: int, modulus: int) -> int:
    """Representative of x mod modulus in [-modulus/2, modulus/2)."""
    if modulus <= 0:
        raise ValueError("modulus must be positive")
    r = x % modulus
    if 2 * r >= modulus:
        r -= modulus
    return r


@dataclass(frozen=True)
class ZeroWindow:
    """Residues m of Z_N with |centered_rep(m)| <= N // 10."""

    modulus: int
    radius: int
    members: frozenset[int] = field(repr=False)

    def contains(self, x: int) -> bool:
        return (x % self.modulus) in self.members

    def residues(self) -> np.ndarray:
        """Members as an ascending int64 array of canonical residues."""
        return np.array(sorted(self.members), dtype=np.int64)

    def __len__(self) -> int:
        return len(self.members)


def zero_window(modulus: int) -> ZeroWindow:
    if modulus < 10:
        raise ValueError("modulus must be at least 10")
    radius = modulus // 10
    members = frozenset(
        m % modulus for m in range(-radius, radius + 1)
    )
    return ZeroWindow(modulus=modulus, radius=radius, members=members)


@dataclass(frozen=True, eq=False)
class CyclicSignal:
    """Immutable complex-valued function on Z_N."""

    values: np.ndarray

    def __post_init__(self) -> None:
        v = np.array(self.values, dtype=np.complex128)
        if v.ndim != 1 or v.size == 0:
            raise ValueError("signal must be a non-empty 1-d array")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def modulus(self) -> int:
        return int(self.values.size)

    def __len__(self) -> int:
        return self.modulus

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.values)))


def dft(signal: CyclicSignal) -> CyclicSignal:
    """Forward transform with the 1/N prefactor."""
    n = signal.modulus
    return CyclicSignal(np.fft.fft(signal.values) / n)


def idft(signal: CyclicSignal) -> CyclicSignal:
    """Inverse transform; exact round-trip partner of dft."""
    n = signal.modulus
    return CyclicSignal(np.fft.ifft(signal.values) * n)


def dft_naive(signal: CyclicSignal) -> CyclicSignal:
    """Direct O(N^2) evaluation of the defining sum.

    Kept as an independent cross-check of the fast transform and its
    normalization; never used on hot paths.
    """
    n = signal.modulus
    k = np.arange(n)
    kernel = np.exp(-2j * np.pi * np.outer(k, k) / n)
    return CyclicSignal(kernel @ signal.values / n)
