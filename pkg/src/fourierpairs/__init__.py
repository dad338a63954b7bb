"""Fourier pairs of discrete atomic measures with central gaps.

Construction pipeline: solve_vanishing produces a signal on Z_N vanishing
together with its transform near zero; build_pair lifts it to a periodic
measure whose transform lives on the same lattice and shares the central
gap; build_nu overlays independently shifted, modulated, weighted copies
into a translation-bounded measure pair whose supports are discrete, of
full rational rank, and free of cross-class arithmetic progressions.
Everything position-related is exact; everything coefficient-related is
complex128 with mpmath only at evaluation boundaries.
"""

from ._kernels import active_backend
from .builder import (
    GapPair,
    NuResourceError,
    NuTruncation,
    build_nu,
    build_pair,
    epsilon,
    schedule_gap,
)
from .cyclic import CyclicSignal, ZeroWindow, centered_rep, dft, dft_naive, idft, zero_window
from .measures import (
    Atom,
    PeriodicLatticeMeasure,
    SourceTerm,
    WindowedMeasure,
    atoms_to_records,
    dilate,
    fourier_periodic,
    lift_periodic,
    overlay,
    records_to_atoms,
    restrict_window,
    translate_modulate,
    unit_variation,
    window_variation,
)
from .positions import SymbolicPosition, compare, nth_prime
from .solver import (
    SolverError,
    VanishingSystem,
    build_system,
    nullspace_vector,
    solve_vanishing,
    spectral_residual,
)
from .verify import (
    GaussianTestFn,
    PairingReport,
    ap_triple_certificate,
    gaussian_batch,
    gaussian_tail,
    min_gap,
    pairing_residual,
    q_rank,
    vanishing_check,
)

__version__ = "0.1.0"

__all__ = [
    "active_backend",
    "GapPair",
    "NuResourceError",
    "NuTruncation",
    "build_nu",
    "build_pair",
    "epsilon",
    "schedule_gap",
    "CyclicSignal",
    "ZeroWindow",
    "centered_rep",
    "dft",
    "dft_naive",
    "idft",
    "zero_window",
    "Atom",
    "PeriodicLatticeMeasure",
    "SourceTerm",
    "WindowedMeasure",
    "atoms_to_records",
    "dilate",
    "fourier_periodic",
    "lift_periodic",
    "overlay",
    "records_to_atoms",
    "restrict_window",
    "translate_modulate",
    "unit_variation",
    "window_variation",
    "SymbolicPosition",
    "compare",
    "nth_prime",
    "SolverError",
    "VanishingSystem",
    "build_system",
    "nullspace_vector",
    "solve_vanishing",
    "spectral_residual",
    "GaussianTestFn",
    "PairingReport",
    "ap_triple_certificate",
    "gaussian_batch",
    "gaussian_tail",
    "min_gap",
    "pairing_residual",
    "q_rank",
    "vanishing_check",
    "__version__",
]
