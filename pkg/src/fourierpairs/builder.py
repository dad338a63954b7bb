"""Construction of the gap pairs and their shifted overlays.

Stage one solves for a signal on Z_N, N = 100 * gap_radius**2, vanishing
together with its transform on the zero window.  Stage two lifts it to the
lattice with spacing 1/(10 * gap_radius): both the measure and its
transform then live on that same lattice, share period N, and vanish on
the open interval (-gap_radius, gap_radius).  Stage three overlays copies
for gap_radius = 2**n, each translated and modulated by eps_n and scaled
by 1 / (n**2 * V_n), where V_n is the larger unit-window variation of the
pair; the weights make every unit window of the full overlay carry mass at
most sum 1/n**2, while the eps shifts keep the union of supports discrete
and free of three-term arithmetic progressions across classes.

A truncation is materialized on a finite window.  A class whose shifted
central gap covers the whole window contributes no atoms at all: its
atoms inside the window would come from source coefficients that are
exact zeros by construction.  Such classes are skipped without building
their (potentially enormous) pair; the skip test is the exact symbolic
comparison window inside (-M_n + eps_n, M_n + eps_n), equivalent atom for
atom to materializing and finding nothing.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction

from .cyclic import zero_window
from .measures import (
    PeriodicLatticeMeasure,
    WindowedMeasure,
    dilate,
    fourier_periodic,
    lift_periodic,
    overlay,
    restrict_window,
    unit_variation,
)
from .positions import SymbolicPosition
from .solver import solve_vanishing

__all__ = [
    "epsilon",
    "schedule_gap",
    "GapPair",
    "build_pair",
    "ClassTerm",
    "NuTruncation",
    "build_nu",
    "NuResourceError",
]

# Hard ceiling on materialized atoms per truncation; CLI maps the error
# to its resource exit code.
ATOM_GUARD = 10_000_000


def epsilon(n: int) -> SymbolicPosition:
    """Shift for class n: sqrt(n-th prime) / 2**n, exactly represented."""
    if n < 1:
        raise ValueError("shift class must be >= 1")
    return SymbolicPosition(Fraction(0), n)


def schedule_gap(n: int) -> int:
    """Vanishing half-width used for class n of the overlay."""
    if n < 1:
        raise ValueError("class index must be >= 1")
    return 2**n


class NuResourceError(RuntimeError):
    """Materializing the requested truncation would exceed the atom guard."""

    def __init__(self, estimate: int):
        super().__init__(
            f"estimated atom count {estimate} exceeds guard {ATOM_GUARD}"
        )
        self.estimate = estimate


@dataclass(frozen=True, eq=False)
class GapPair:
    """Measure and transform on one lattice, both vanishing centrally.

    mu and mu_hat share spacing 1/(10*gap_radius) and period
    100*gap_radius**2; each assigns zero mass to (-gap_radius, gap_radius),
    mu by exact construction, mu_hat up to the solver residual.
    """

    gap_radius: int
    modulus: int
    mu: PeriodicLatticeMeasure
    mu_hat: PeriodicLatticeMeasure

    @property
    def spacing(self) -> Fraction:
        return self.mu.spacing


@functools.lru_cache(maxsize=None)
def build_pair(gap_radius: int) -> GapPair:
    """Deterministic pair for the given half-width (cached per process)."""
    if gap_radius < 1:
        raise ValueError("gap radius must be >= 1")
    modulus = 100 * gap_radius * gap_radius
    signal = solve_vanishing(modulus)
    scale = Fraction(1, 10 * gap_radius)
    mu = dilate(lift_periodic(signal), scale)
    mu_hat = fourier_periodic(mu)
    return GapPair(gap_radius=gap_radius, modulus=modulus, mu=mu, mu_hat=mu_hat)


@dataclass(frozen=True, eq=False)
class ClassTerm:
    """Bookkeeping for one overlay class in a truncation.

    Skipped classes record the gap radius only: their atoms in the window
    are exact zeros, so no pair is built and no variation is measured.
    """

    eps_class: int
    gap_radius: int
    skipped: bool
    variation: float | None = None
    weight_divisor: float | None = None
    pair: GapPair | None = None


@dataclass(frozen=True, eq=False)
class NuTruncation:
    """Finite-window materialization of the overlay and its transform."""

    n_max: int
    window: tuple[Fraction, Fraction]
    terms: tuple[ClassTerm, ...]
    nu: WindowedMeasure
    nu_hat: WindowedMeasure
    variation_bound: float


def _class_contributes(
    n: int, window: tuple[Fraction, Fraction]
) -> bool:
    """Exact test: does class n place any atom inside [lo, hi]?

    Class n supports lie in (-inf, -M + eps_n] union [M + eps_n, inf) up
    to exact-zero coefficients, M = schedule_gap(n): an atom at

        k/(10 M) + eps_n  in  [lo, hi]  with  |k/(10 M)| < M

    has k in the zero window of Z_{100 M^2}, hence coefficient exactly
    zero on both sides of the pair.  So the class contributes iff the
    window reaches M + eps_n or -M + eps_n.
    """
    lo, hi = window
    gap = schedule_gap(n)
    upper_gap_edge = SymbolicPosition(Fraction(gap), n)
    lower_gap_edge = SymbolicPosition(Fraction(-gap), n)
    hi_pos = SymbolicPosition(hi)
    lo_pos = SymbolicPosition(lo)
    inside_upper = hi_pos < upper_gap_edge
    inside_lower = lo_pos > lower_gap_edge
    return not (inside_upper and inside_lower)


def _estimate_atoms(
    n_values: list[int], window: tuple[Fraction, Fraction]
) -> int:
    lo, hi = window
    width = hi - lo
    total = 0
    for n in n_values:
        spacing = Fraction(1, 10 * schedule_gap(n))
        total += 2 * (math.ceil(width / spacing) + 1)
    return total


def build_nu(
    n_max: int,
    window: tuple[Fraction, Fraction],
    prec: int = 128,
) -> NuTruncation:
    """Materialize the overlay truncation sum_{n<=n_max} and its transform.

    Per contributing class n the pair with gap 2**n is built, weighted by
    1/(n**2 * V_n), translated by eps_n, and modulated by eps_n in the
    order matching the transform calculus: the direct side applies the
    phase at the shifted position, the transform side applies the negated
    phase at the source position.  Classes whose gap covers the window are
    recorded as skipped.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    lo, hi = (Fraction(window[0]), Fraction(window[1]))
    if lo > hi:
        raise ValueError("window is empty")
    window = (lo, hi)
    contributing = [n for n in range(1, n_max + 1) if _class_contributes(n, window)]
    estimate = _estimate_atoms(contributing, window)
    if estimate > ATOM_GUARD:
        raise NuResourceError(estimate)
    terms: list[ClassTerm] = []
    nu_parts: list[WindowedMeasure] = []
    nu_hat_parts: list[WindowedMeasure] = []
    for n in range(1, n_max + 1):
        gap = schedule_gap(n)
        if n not in contributing:
            terms.append(ClassTerm(eps_class=n, gap_radius=gap, skipped=True))
            continue
        pair = build_pair(gap)
        variation = max(unit_variation(pair.mu), unit_variation(pair.mu_hat))
        divisor = variation * n * n
        weight = 1.0 / divisor
        shift = epsilon(n)
        nu_parts.append(
            restrict_window(
                pair.mu,
                window,
                weight=weight,
                shift=shift,
                mod_freq=shift,
                mod_sign=1,
                modulate_before_shift=False,
                prec=prec,
            )
        )
        nu_hat_parts.append(
            restrict_window(
                pair.mu_hat,
                window,
                weight=weight,
                shift=shift,
                mod_freq=shift,
                mod_sign=-1,
                modulate_before_shift=True,
                prec=prec,
            )
        )
        terms.append(
            ClassTerm(
                eps_class=n,
                gap_radius=gap,
                skipped=False,
                variation=variation,
                weight_divisor=divisor,
                pair=pair,
            )
        )
    empty = WindowedMeasure(window=window, atoms=(), provenance=())
    nu = overlay(nu_parts) if nu_parts else empty
    nu_hat = overlay(nu_hat_parts) if nu_hat_parts else empty
    bound = sum(1.0 / (n * n) for n in range(1, n_max + 1))
    return NuTruncation(
        n_max=n_max,
        window=window,
        terms=tuple(terms),
        nu=nu,
        nu_hat=nu_hat,
        variation_bound=bound,
    )
