"""Exact arithmetic for atom positions of the form q + eps_n.

Supports of the overlaid measures live on shifted lattices: every atom sits
at a rational number plus one member of the shift sequence

    eps_0 = 0,    eps_n = sqrt(p_n) / 2**n   (p_n the n-th prime, n >= 1),

which is strictly decreasing, contained in (0, 1), and Q-linearly
independent together with 1.  A position is therefore stored as the exact
pair (rational, class) and never as a float.  Two positions are equal iff
both components match; order is decided by refining exact rational
enclosures of the square roots (integer square root at escalating
precision), so no floating-point tolerance ever enters a support-set
decision.  Distinct positions always separate after finitely many
refinements because equality is detectable symbolically first.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath

__all__ = [
    "nth_prime",
    "sqrt_enclosure",
    "eps_enclosure",
    "eps_value",
    "SymbolicPosition",
    "ZERO_POSITION",
    "compare",
]

# Refinement ladder for order decisions, in fractional bits.
_START_BITS = 64
_MAX_BITS = 1 << 20

_primes: list[int] = [2, 3, 5, 7, 11, 13]


def nth_prime(n: int) -> int:
    """Return the n-th prime, 1-indexed (nth_prime(1) == 2)."""
    if n < 1:
        raise ValueError("prime index must be >= 1")
    while len(_primes) < n:
        cand = _primes[-1] + 2
        while True:
            if all(cand % p for p in _primes if p * p <= cand):
                _primes.append(cand)
                break
            cand += 2
    return _primes[n - 1]


def sqrt_enclosure(m: int, bits: int) -> tuple[Fraction, Fraction]:
    """Exact rational enclosure of sqrt(m) with width at most 2**-bits.

    Uses math.isqrt on m << (2*bits): with s = isqrt(m * 4**bits),
    s/2**bits <= sqrt(m) < (s+1)/2**bits, and the lower bound is attained
    exactly iff m is a perfect square.
    """
    if m < 0:
        raise ValueError("negative radicand")
    s = math.isqrt(m << (2 * bits))
    lo = Fraction(s, 1 << bits)
    if s * s == m << (2 * bits):
        return lo, lo
    return lo, Fraction(s + 1, 1 << bits)


@functools.lru_cache(maxsize=None)
def eps_enclosure(n: int, bits: int) -> tuple[Fraction, Fraction]:
    """Exact rational enclosure of eps_n = sqrt(p_n) / 2**n."""
    if n < 0:
        raise ValueError("shift class must be >= 0")
    if n == 0:
        return Fraction(0), Fraction(0)
    lo, hi = sqrt_enclosure(nth_prime(n), bits)
    scale = 1 << n
    return lo / scale, hi / scale


def eps_value(n: int, prec: int = 128) -> mpmath.mpf:
    """eps_n evaluated as an mpmath float at the given binary precision."""
    if n == 0:
        return mpmath.mpf(0)
    with mpmath.workprec(prec + 16):
        return mpmath.sqrt(nth_prime(n)) / (1 << n)


@dataclass(frozen=True)
class SymbolicPosition:
    """Exact position rational + eps_{eps_class}.

    Hash and equality use the exact pair, so positions are usable as
    dictionary keys when merging overlapping atom lists.
    """

    rational: Fraction
    eps_class: int = 0

    def __post_init__(self) -> None:
        if not isinstance(self.rational, Fraction):
            object.__setattr__(self, "rational", Fraction(self.rational))
        if self.eps_class < 0:
            raise ValueError("shift class must be >= 0")

    def enclosure(self, bits: int) -> tuple[Fraction, Fraction]:
        lo, hi = eps_enclosure(self.eps_class, bits)
        return self.rational + lo, self.rational + hi

    def to_mpf(self, prec: int = 128) -> mpmath.mpf:
        with mpmath.workprec(prec):
            return mpmath.mpf(self.rational.numerator) / self.rational.denominator + eps_value(
                self.eps_class, prec
            )

    def decimal(self, digits: int = 36) -> str:
        """Decimal string with the given number of significant digits."""
        with mpmath.workdps(digits + 10):
            return mpmath.nstr(
                self.to_mpf(prec=int(digits * 3.4) + 32),
                digits,
                strip_zeros=False,
            )

    def shifted(self, dq: Fraction | int) -> "SymbolicPosition":
        """Translate by an exact rational; the shift class is unchanged."""
        return SymbolicPosition(self.rational + Fraction(dq), self.eps_class)

    def compare(self, other: "SymbolicPosition") -> int:
        return compare(self, other)

    def __lt__(self, other: "SymbolicPosition") -> bool:
        return compare(self, other) < 0

    def __le__(self, other: "SymbolicPosition") -> bool:
        return compare(self, other) <= 0

    def __gt__(self, other: "SymbolicPosition") -> bool:
        return compare(self, other) > 0

    def __ge__(self, other: "SymbolicPosition") -> bool:
        return compare(self, other) >= 0

    def __float__(self) -> float:
        return float(self.to_mpf(prec=64))

    def __repr__(self) -> str:
        if self.eps_class == 0:
            return f"SymbolicPosition({self.rational!s})"
        return f"SymbolicPosition({self.rational!s} + eps_{self.eps_class})"


ZERO_POSITION = SymbolicPosition(Fraction(0), 0)


def compare(a: SymbolicPosition, b: SymbolicPosition) -> int:
    """Exact three-way comparison, -1 / 0 / +1.

    Equal (rational, class) pairs are equal outright.  Same class with
    different rationals reduces to a Fraction comparison.  Across classes
    the values are provably distinct (Q-linear independence), so interval
    refinement terminates.
    """
    if a.eps_class == b.eps_class:
        qa, qb = a.rational, b.rational
        return (qa > qb) - (qa < qb)
    bits = _START_BITS
    while True:
        alo, ahi = a.enclosure(bits)
        blo, bhi = b.enclosure(bits)
        if ahi < blo:
            return -1
        if bhi < alo:
            return 1
        bits *= 2
        if bits > _MAX_BITS:
            raise RuntimeError(
                "enclosure refinement failed to separate distinct positions"
            )
