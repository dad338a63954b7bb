"""Discrete atomic measures on lattices, their transforms, and windows.

Three layers of structure:

* PeriodicLatticeMeasure: sum_k c[k mod P] delta(A*k) for exact rational
  spacing A > 0 and a complex coefficient array of period P.  Its Fourier
  transform (kernel exp(-2 pi i x xi)) is again such a measure, living on
  the lattice with spacing 1/(A*P):

      FT[ sum_k c_k delta(A k) ](xi) = sum_m (1/A) hat c(m) delta(m/(A P)),

  with hat c the cyclic transform carrying the 1/P prefactor.  The identity
  follows from the Poisson summation formula applied to each of the P
  residue classes.  Applying fourier_periodic twice returns the reflection
  of the original measure, the discrete analogue of hat-hat f = f(-x).

* WindowedMeasure: the exact restriction of a finite combination of
  shifted, modulated periodic measures to a rational window [lo, hi].
  Atom positions are SymbolicPosition values (rational + eps_class), so
  membership, merging, and ordering decisions are exact.  Provenance
  records keep enough data to rebuild every atom from its source measure.

* Variation bounds: unit_variation computes the exact supremum over all
  half-open unit windows [t, t+1) of the total coefficient mass inside,
  used to normalize overlay weights so that truncations stay uniformly
  translation bounded.

Shift and modulation operators follow the conventions

    (T_r m) = m translated by r,        FT(T_r m) = M_{-r} hat m,
    (M_a m) = m times exp(2 pi i a x),  FT(M_a m) = T_a hat m,

and do not commute: T_r M_a = exp(-2 pi i a r) M_a T_r.  The
modulate_before_shift flag selects which composition a provenance record
means: False applies the phase at the atom's final (shifted) position,
i.e. M_a T_r; True applies it at the source position, i.e. T_r M_a.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import mpmath
import numpy as np

from .cyclic import CyclicSignal, dft
from .positions import ZERO_POSITION, SymbolicPosition

__all__ = [
    "DROP_RELATIVE",
    "Atom",
    "PeriodicLatticeMeasure",
    "SourceTerm",
    "WindowedMeasure",
    "lift_periodic",
    "dilate",
    "fourier_periodic",
    "restrict_window",
    "translate_modulate",
    "overlay",
    "unit_variation",
    "window_variation",
    "atoms_to_records",
    "records_to_atoms",
]

# Atoms whose coefficient magnitude falls below this fraction of the
# source measure's largest coefficient are treated as numerical zeros.
DROP_RELATIVE = 1e-12

_DIGITS = 36


@dataclass(frozen=True)
class Atom:
    """Single weighted Dirac atom at an exact position."""

    position: SymbolicPosition
    coeff: complex


@dataclass(frozen=True, eq=False)
class PeriodicLatticeMeasure:
    """sum_k coeffs[k mod period] * delta(spacing * k)."""

    spacing: Fraction
    coeffs: np.ndarray

    def __post_init__(self) -> None:
        if not isinstance(self.spacing, Fraction):
            object.__setattr__(self, "spacing", Fraction(self.spacing))
        if self.spacing <= 0:
            raise ValueError("spacing must be positive")
        c = np.array(self.coeffs, dtype=np.complex128)
        if c.ndim != 1 or c.size == 0:
            raise ValueError("coefficients must be a non-empty 1-d array")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def period(self) -> int:
        return int(self.coeffs.size)

    @property
    def real_period(self) -> Fraction:
        """Translation period on the line, spacing * period."""
        return self.spacing * self.period

    def max_abs_coeff(self) -> float:
        return float(np.max(np.abs(self.coeffs)))


def lift_periodic(signal: CyclicSignal) -> PeriodicLatticeMeasure:
    """Lift f on Z_N to sum_k f(k mod N) delta(k) on the integer lattice."""
    return PeriodicLatticeMeasure(spacing=Fraction(1), coeffs=signal.values)


def dilate(measure: PeriodicLatticeMeasure, alpha: Fraction | int) -> PeriodicLatticeMeasure:
    """Push forward under x -> alpha * x; coefficients are unchanged."""
    alpha = Fraction(alpha)
    if alpha <= 0:
        raise ValueError("dilation factor must be positive")
    return PeriodicLatticeMeasure(spacing=measure.spacing * alpha, coeffs=measure.coeffs)


def fourier_periodic(measure: PeriodicLatticeMeasure) -> PeriodicLatticeMeasure:
    """Fourier transform, again a periodic lattice measure (see module doc)."""
    inv_spacing = 1 / measure.spacing
    hat = dft(CyclicSignal(measure.coeffs)).values * float(inv_spacing)
    return PeriodicLatticeMeasure(
        spacing=inv_spacing / measure.period,
        coeffs=hat,
    )


@dataclass(frozen=True, eq=False)
class SourceTerm:
    """Provenance record: weight * Op(shift, modulation) applied to measure.

    The record describes exactly one shifted-and-modulated copy of a
    periodic measure; every atom of a WindowedMeasure can be recomputed
    from the records that mention its shift class.
    """

    eps_class: int
    weight: float
    measure: PeriodicLatticeMeasure
    shift: SymbolicPosition = ZERO_POSITION
    mod_freq: SymbolicPosition = ZERO_POSITION
    mod_sign: int = 1
    modulate_before_shift: bool = False

    def __post_init__(self) -> None:
        if self.mod_sign not in (1, -1):
            raise ValueError("modulation sign must be +1 or -1")


@dataclass(frozen=True, eq=False)
class WindowedMeasure:
    """Atoms of an overlay measure inside the exact window [lo, hi]."""

    window: tuple[Fraction, Fraction]
    atoms: tuple[Atom, ...]
    provenance: tuple[SourceTerm, ...] = field(repr=False, default=())

    def __post_init__(self) -> None:
        lo, hi = self.window
        if not (isinstance(lo, Fraction) and isinstance(hi, Fraction)):
            object.__setattr__(self, "window", (Fraction(lo), Fraction(hi)))
            lo, hi = self.window
        if lo > hi:
            raise ValueError("window is empty")

    def __len__(self) -> int:
        return len(self.atoms)

    def max_abs_coeff(self) -> float:
        if not self.atoms:
            return 0.0
        return max(abs(a.coeff) for a in self.atoms)

    def classes(self) -> tuple[int, ...]:
        return tuple(sorted({a.position.eps_class for a in self.atoms}))


def _window_positions(window: tuple[Fraction, Fraction]) -> tuple[SymbolicPosition, SymbolicPosition]:
    lo, hi = window
    return SymbolicPosition(lo), SymbolicPosition(hi)


def _lattice_indices(
    spacing: Fraction,
    shift: SymbolicPosition,
    window: tuple[Fraction, Fraction],
) -> range:
    """Exact index range {k : lo <= spacing*k + shift <= hi}, both ends closed."""
    lo, hi = window
    slo, shi = shift.enclosure(128)
    k_lo = math.floor((lo - shi) / spacing)
    k_hi = math.ceil((hi - slo) / spacing)
    lo_pos, hi_pos = _window_positions(window)

    def pos(k: int) -> SymbolicPosition:
        return SymbolicPosition(spacing * k + shift.rational, shift.eps_class)

    while k_lo <= k_hi and pos(k_lo) < lo_pos:
        k_lo += 1
    while k_hi >= k_lo and pos(k_hi) > hi_pos:
        k_hi -= 1
    return range(k_lo, k_hi + 1)


def _phase_factor(
    freq: SymbolicPosition, sign: int, x: mpmath.mpf, prec: int
) -> complex:
    with mpmath.workprec(prec):
        f = freq.to_mpf(prec)
        return complex(mpmath.expjpi(2 * sign * f * x))


def restrict_window(
    measure: PeriodicLatticeMeasure,
    window: tuple[Fraction, Fraction],
    *,
    weight: float = 1.0,
    shift: SymbolicPosition = ZERO_POSITION,
    mod_freq: SymbolicPosition = ZERO_POSITION,
    mod_sign: int = 1,
    modulate_before_shift: bool = False,
    prec: int = 128,
) -> WindowedMeasure:
    """Atoms of weight * Op(shift, modulation)(measure) inside [lo, hi].

    Both window endpoints are included.  Atoms whose source coefficient is
    an exact zero, or below DROP_RELATIVE times the measure's largest
    coefficient, are dropped.  Phases are evaluated with mpmath at the
    given binary precision before the single rounding to complex128.
    """
    lo, hi = (Fraction(window[0]), Fraction(window[1]))
    if lo > hi:
        raise ValueError("window is empty")
    window = (lo, hi)
    spacing = measure.spacing
    period = measure.period
    coeffs = measure.coeffs
    scale = measure.max_abs_coeff()
    modulated = not (mod_freq.eps_class == 0 and mod_freq.rational == 0)
    atoms: list[Atom] = []
    for k in _lattice_indices(spacing, shift, window):
        c = coeffs[k % period]
        if c == 0 or abs(c) < DROP_RELATIVE * scale:
            continue
        position = SymbolicPosition(spacing * k + shift.rational, shift.eps_class)
        coeff = weight * complex(c)
        if modulated:
            if modulate_before_shift:
                src = spacing * k
                with mpmath.workprec(prec):
                    x = mpmath.mpf(src.numerator) / src.denominator
            else:
                x = position.to_mpf(prec)
            coeff *= _phase_factor(mod_freq, mod_sign, x, prec)
        atoms.append(Atom(position=position, coeff=coeff))
    term = SourceTerm(
        eps_class=shift.eps_class,
        weight=weight,
        measure=measure,
        shift=shift,
        mod_freq=mod_freq,
        mod_sign=mod_sign,
        modulate_before_shift=modulate_before_shift,
    )
    return WindowedMeasure(window=window, atoms=tuple(atoms), provenance=(term,))


def _add_positions(a: SymbolicPosition, b: SymbolicPosition) -> SymbolicPosition:
    if a.eps_class and b.eps_class:
        raise ValueError(
            "sum of two irrational shift classes is not representable"
        )
    return SymbolicPosition(a.rational + b.rational, a.eps_class or b.eps_class)


def translate_modulate(
    measure: WindowedMeasure,
    shift: SymbolicPosition = ZERO_POSITION,
    mod_freq: SymbolicPosition = ZERO_POSITION,
    mod_sign: int = 1,
    modulate_before_shift: bool = False,
    prec: int = 128,
) -> WindowedMeasure:
    """Apply a shift and a modulation to an already-windowed measure.

    The window is translated along; an irrational shift widens the upper
    endpoint by one (the shift lies in (0, 1)) to keep rational bounds.
    Raises ValueError when the result cannot be described by one
    provenance record per source term, e.g. stacking two irrational
    shifts or re-shifting an already modulated term.
    """
    lo, hi = measure.window
    zero_shift = shift.eps_class == 0 and shift.rational == 0
    modulated = not (mod_freq.eps_class == 0 and mod_freq.rational == 0)
    if shift.eps_class == 0:
        new_window = (lo + shift.rational, hi + shift.rational)
    else:
        new_window = (lo + shift.rational, hi + shift.rational + 1)
    atoms: list[Atom] = []
    for atom in measure.atoms:
        position = _add_positions(atom.position, shift)
        coeff = atom.coeff
        if modulated:
            if modulate_before_shift:
                x = atom.position.to_mpf(prec)
            else:
                x = position.to_mpf(prec)
            coeff = coeff * _phase_factor(mod_freq, mod_sign, x, prec)
        atoms.append(Atom(position=position, coeff=coeff))
    terms: list[SourceTerm] = []
    for term in measure.provenance:
        term_modulated = not (
            term.mod_freq.eps_class == 0 and term.mod_freq.rational == 0
        )
        if not term_modulated:
            composed_before = modulate_before_shift
            if modulate_before_shift and not (
                term.shift.eps_class == 0 and term.shift.rational == 0
            ):
                raise ValueError(
                    "pre-shift modulation after an existing shift is not "
                    "representable in one provenance record"
                )
            terms.append(
                SourceTerm(
                    eps_class=_add_positions(term.shift, shift).eps_class,
                    weight=term.weight,
                    measure=term.measure,
                    shift=_add_positions(term.shift, shift),
                    mod_freq=mod_freq,
                    mod_sign=mod_sign,
                    modulate_before_shift=composed_before,
                )
            )
        elif zero_shift and not modulated:
            terms.append(term)
        else:
            raise ValueError(
                "composition with an already modulated term is not "
                "representable in one provenance record"
            )
    return WindowedMeasure(
        window=new_window, atoms=tuple(atoms), provenance=tuple(terms)
    )


def overlay(parts: Sequence[WindowedMeasure]) -> WindowedMeasure:
    """Sum of windowed measures over one common window.

    Atoms at symbolically equal positions merge by adding coefficients;
    merged coefficients below DROP_RELATIVE times the largest merged
    magnitude (or exactly zero) are removed.
    """
    if not parts:
        raise ValueError("nothing to overlay")
    window = parts[0].window
    for p in parts[1:]:
        if p.window != window:
            raise ValueError("overlay requires identical windows")
    merged: dict[SymbolicPosition, complex] = {}
    for p in parts:
        for atom in p.atoms:
            merged[atom.position] = merged.get(atom.position, 0j) + atom.coeff
    if merged:
        scale = max(abs(c) for c in merged.values())
        atoms = tuple(
            Atom(position=pos, coeff=merged[pos])
            for pos in sorted(merged)
            if merged[pos] != 0 and abs(merged[pos]) >= DROP_RELATIVE * scale
        )
    else:
        atoms = ()
    provenance = tuple(t for p in parts for t in p.provenance)
    return WindowedMeasure(window=window, atoms=atoms, provenance=provenance)


def unit_variation(measure: PeriodicLatticeMeasure) -> float:
    """Exact sup over t of sum of |coeff| on the half-open window [t, t+1).

    Sliding any window up to the first atom it contains never decreases
    the sum, so the supremum is attained with t at an atom position; by
    periodicity one period of anchors suffices.  The window starting at
    atom index i contains indices i .. i+s with s the largest integer with
    spacing * s < 1.
    """
    spacing = measure.spacing
    period = measure.period
    span = math.ceil(1 / spacing) - 1
    mags = np.abs(measure.coeffs)
    reps = -(-(period + span) // period)
    ext = np.tile(mags, reps)
    best = 0.0
    for i in range(period):
        s = float(np.sum(ext[i : i + span + 1]))
        if s > best:
            best = s
    return best


def window_variation(measure: WindowedMeasure) -> float:
    """Largest unit-window coefficient mass among the materialized atoms.

    Anchors at each atom position and at the window's lower endpoint; by
    the sliding argument this reaches the supremum over all unit windows
    whose content is fully materialized.
    """
    lo_pos, _ = _window_positions(measure.window)
    anchors: list[SymbolicPosition] = [lo_pos] + [a.position for a in measure.atoms]
    atoms = measure.atoms
    n = len(atoms)
    best = 0.0
    start = 0
    for anchor in anchors:
        top = anchor.shifted(1)
        while start < n and atoms[start].position < anchor:
            start += 1
        total = 0.0
        j = start
        while j < n and atoms[j].position < top:
            total += abs(atoms[j].coeff)
            j += 1
        if total > best:
            best = total
    return best


def atoms_to_records(measure: WindowedMeasure, digits: int = _DIGITS) -> list[dict]:
    """JSON-ready atom list: exact rational part, class, decimal position.

    position_float carries at least 30 significant digits so downstream
    consumers never need to re-derive square roots.
    """
    records = []
    for atom in measure.atoms:
        q = atom.position.rational
        records.append(
            {
                "position_rational": f"{q.numerator}/{q.denominator}",
                "class": atom.position.eps_class,
                "position_float": atom.position.decimal(digits),
                "coeff_re": float(atom.coeff.real),
                "coeff_im": float(atom.coeff.imag),
            }
        )
    return records


def records_to_atoms(records: Iterable[dict]) -> tuple[Atom, ...]:
    """Inverse of atoms_to_records up to the decimal position string."""
    atoms = []
    for r in records:
        pos = SymbolicPosition(Fraction(r["position_rational"]), int(r["class"]))
        atoms.append(Atom(position=pos, coeff=complex(r["coeff_re"], r["coeff_im"])))
    return tuple(atoms)
