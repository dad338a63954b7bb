import numpy as np
import pytest

from fourierpairs._kernels import active_backend, eliminate_with_backend
from fourierpairs.cyclic import zero_window
from fourierpairs.solver import (
    SolverError,
    build_system,
    nullspace_vector,
    solve_vanishing,
    spectral_residual,
)


def _numba_available() -> bool:
    try:
        import numba  # noqa: F401
    except ImportError:
        return False
    return True


def test_system_shape_and_entries():
    sys100 = build_system(100)
    assert sys100.shape == (21, 79)
    assert list(sys100.row_residues[:3]) == [0, 1, 2]
    assert sys100.row_residues[-1] == 99
    assert sys100.col_residues[0] == 11 and sys100.col_residues[-1] == 89
    # spot-check the defining entries
    for i, j in ((0, 0), (5, 17), (20, 78)):
        m = sys100.row_residues[i]
        k = sys100.col_residues[j]
        want = np.exp(-2j * np.pi * m * k / 100) / 100
        assert abs(sys100.matrix[i, j] - want) < 5e-15
    assert build_system(900).shape == (181, 719)


def test_nullspace_vector_properties():
    system = build_system(100)
    v = nullspace_vector(system)
    assert v.shape == (79,)
    top = np.argmax(np.abs(v))
    assert v[top] == 1.0 + 0.0j
    assert np.max(np.abs(system.matrix @ v)) < 1e-12


def test_nullspace_deterministic():
    system = build_system(100)
    v1 = nullspace_vector(system)
    v2 = nullspace_vector(system)
    assert np.array_equal(v1, v2)


def test_independent_null_vectors():
    system = build_system(100)
    v1 = nullspace_vector(system, free_index=-1)
    v2 = nullspace_vector(system, free_index=-2)
    stacked = np.vstack([v1, v2])
    assert np.linalg.matrix_rank(stacked) == 2
    assert np.max(np.abs(system.matrix @ v2)) < 1e-12


def test_solve_vanishing_contract():
    for modulus, zeros in ((100, 21), (400, 81)):
        f = solve_vanishing(modulus)
        win = zero_window(modulus)
        assert f.max_abs() == 1.0
        window_values = f.values[win.residues()]
        assert int(np.sum(window_values == 0)) == zeros
        assert spectral_residual(f, win) <= 1e-9


def test_solve_support_spreads_across_period():
    # windows anywhere along the period must be able to see atoms: the
    # significant entries may not cluster on one residue band
    f = solve_vanishing(400)
    mags = np.abs(f.values)
    big = np.where(mags >= 1e-12 * mags.max())[0]
    assert big.min() <= 60 and big.max() >= 340
    assert len(big) >= 60


def test_solve_deterministic():
    a = solve_vanishing(100)
    b = solve_vanishing(100)
    assert np.array_equal(a.values, b.values)


def test_solver_error_carries_best_residual():
    err = SolverError("boom", 0.125)
    assert err.best_residual == 0.125


def test_backend_listing():
    assert active_backend() in ("numba", "numpy")


@pytest.mark.skipif(not _numba_available(), reason="numba not importable")
def test_backend_agreement():
    rng = np.random.default_rng(23)
    a = rng.standard_normal((30, 50)) + 1j * rng.standard_normal((30, 50))
    a = np.ascontiguousarray(a.astype(np.complex128))
    tol = np.finfo(np.float64).eps * 50 * float(np.max(np.abs(a)))
    a_np = a.copy()
    a_nb = a.copy()
    piv_np = eliminate_with_backend(a_np, tol, "numpy")
    piv_nb = eliminate_with_backend(a_nb, tol, "numba")
    assert np.array_equal(piv_np, piv_nb)
    assert np.max(np.abs(a_np - a_nb)) < 1e-10


@pytest.mark.skipif(not _numba_available(), reason="numba not importable")
def test_backend_agreement_on_real_system():
    system = build_system(100)
    tol = np.finfo(np.float64).eps * max(system.shape) * float(
        np.max(np.abs(system.matrix))
    )
    a_np = system.matrix.copy()
    a_nb = system.matrix.copy()
    piv_np = eliminate_with_backend(a_np, tol, "numpy")
    piv_nb = eliminate_with_backend(a_nb, tol, "numba")
    assert np.array_equal(piv_np, piv_nb)


def test_unknown_backend_rejected():
    a = np.zeros((2, 2), dtype=np.complex128)
    with pytest.raises(ValueError):
        eliminate_with_backend(a, 0.0, "fortran")
