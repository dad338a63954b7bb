import cmath
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fourierpairs.cyclic import CyclicSignal
from fourierpairs.measures import (
    Atom,
    PeriodicLatticeMeasure,
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
from fourierpairs.positions import SymbolicPosition

F = Fraction


def comb(spacing=F(1)) -> PeriodicLatticeMeasure:
    return PeriodicLatticeMeasure(spacing=F(spacing), coeffs=np.array([1.0 + 0j]))


class TestPeriodicLattice:
    def test_validation(self):
        with pytest.raises(ValueError):
            PeriodicLatticeMeasure(spacing=F(0), coeffs=np.array([1.0]))
        with pytest.raises(ValueError):
            PeriodicLatticeMeasure(spacing=F(-1, 2), coeffs=np.array([1.0]))
        with pytest.raises(ValueError):
            PeriodicLatticeMeasure(spacing=F(1), coeffs=np.array([]))

    def test_coeffs_read_only(self):
        m = PeriodicLatticeMeasure(spacing=F(1, 2), coeffs=np.array([1.0, 2.0]))
        with pytest.raises(ValueError):
            m.coeffs[0] = 5.0

    def test_bookkeeping(self):
        m = PeriodicLatticeMeasure(spacing=F(1, 3), coeffs=np.arange(1, 7))
        assert m.period == 6
        assert m.real_period == F(2)
        assert m.max_abs_coeff() == 6.0

    def test_lift(self):
        sig = CyclicSignal(np.array([1.0, -2.0, 3.0j]))
        m = lift_periodic(sig)
        assert m.spacing == F(1)
        assert np.array_equal(m.coeffs, sig.values)

    def test_dilate(self):
        m = PeriodicLatticeMeasure(spacing=F(1, 2), coeffs=np.array([1.0, 4.0]))
        d = dilate(m, F(1, 5))
        assert d.spacing == F(1, 10)
        assert np.array_equal(d.coeffs, m.coeffs)
        with pytest.raises(ValueError):
            dilate(m, 0)


class TestFourierPeriodic:
    def test_comb_self_dual(self):
        hat = fourier_periodic(comb())
        assert hat.spacing == F(1)
        assert hat.period == 1
        assert abs(hat.coeffs[0] - 1.0) < 1e-15

    def test_coefficient_formula(self):
        # hat measure at m/(A P) weighs (1/A) * (1/P) sum_k c_k e^{-2pi i mk/P}
        rng = np.random.default_rng(7)
        c = rng.standard_normal(8) + 1j * rng.standard_normal(8)
        a = F(1, 3)
        m = PeriodicLatticeMeasure(spacing=a, coeffs=c)
        hat = fourier_periodic(m)
        assert hat.spacing == F(3, 8)
        for j in range(8):
            direct = sum(
                c[k] * cmath.exp(-2j * cmath.pi * j * k / 8) for k in range(8)
            ) / (8 * a)
            assert abs(hat.coeffs[j] - direct) < 1e-13

    def test_double_transform_is_reflection(self):
        rng = np.random.default_rng(8)
        c = rng.standard_normal(6) + 1j * rng.standard_normal(6)
        m = PeriodicLatticeMeasure(spacing=F(2, 5), coeffs=c)
        back = fourier_periodic(fourier_periodic(m))
        assert back.spacing == m.spacing
        reflected = c[(-np.arange(6)) % 6]
        assert np.max(np.abs(back.coeffs - reflected)) < 1e-13


class TestRestrictWindow:
    def test_comb_counts(self):
        w = restrict_window(comb(), (F(-5, 2), F(5, 2)))
        assert len(w) == 5
        assert [a.position.rational for a in w.atoms] == [-2, -1, 0, 1, 2]
        assert all(a.coeff == 1 for a in w.atoms)

    def test_endpoints_included(self):
        w = restrict_window(comb(F(1, 10)), (F(0), F(35, 100)))
        assert [a.position.rational for a in w.atoms] == [
            F(0),
            F(1, 10),
            F(2, 10),
            F(3, 10),
        ]
        exact = restrict_window(comb(F(1, 10)), (F(1, 10), F(3, 10)))
        assert len(exact) == 3

    def test_empty_window_rejected(self):
        with pytest.raises(ValueError):
            restrict_window(comb(), (F(1), F(0)))

    def test_drop_rules(self):
        m = PeriodicLatticeMeasure(
            spacing=F(1), coeffs=np.array([1.0, 1e-15, 0.0, 0.5])
        )
        w = restrict_window(m, (F(0), F(3)))
        assert [a.position.rational for a in w.atoms] == [0, 3]

    def test_shift_and_modulation_against_oracle(self):
        m = PeriodicLatticeMeasure(spacing=F(1, 4), coeffs=np.array([1.0, 2.0]))
        r = SymbolicPosition(F(1, 8))
        f = F(1, 3)
        w = restrict_window(
            m,
            (F(0), F(2)),
            weight=0.7,
            shift=r,
            mod_freq=SymbolicPosition(f),
            mod_sign=-1,
        )
        assert len(w) == 8
        for atom in w.atoms:
            k = (atom.position.rational - F(1, 8)) * 4
            x = float(atom.position.rational)
            want = 0.7 * m.coeffs[int(k) % 2] * cmath.exp(-2j * cmath.pi * float(f) * x)
            assert abs(atom.coeff - want) < 5e-13

    def test_modulate_before_shift_phase_site(self):
        # before=True evaluates the phase at the source position, so the two
        # variants differ atomwise by exp(2 pi i sign f r)
        m = PeriodicLatticeMeasure(spacing=F(1, 2), coeffs=np.array([1.0, 3.0]))
        kw = dict(
            shift=SymbolicPosition(F(1, 4)),
            mod_freq=SymbolicPosition(F(1, 3)),
            mod_sign=1,
        )
        after = restrict_window(m, (F(0), F(2)), modulate_before_shift=False, **kw)
        before = restrict_window(m, (F(0), F(2)), modulate_before_shift=True, **kw)
        ratio = cmath.exp(2j * cmath.pi * (1 / 3) * (1 / 4))
        assert len(after) == len(before)
        for x, y in zip(after.atoms, before.atoms):
            assert x.position == y.position
            assert abs(x.coeff - y.coeff * ratio) < 1e-13

    def test_irrational_shift_positions(self):
        eps1 = SymbolicPosition(F(0), 1)
        w = restrict_window(comb(), (F(-3), F(4)), shift=eps1)
        assert all(a.position.eps_class == 1 for a in w.atoms)
        assert [a.position.rational for a in w.atoms] == list(range(-3, 4))

    def test_provenance_recorded(self):
        w = restrict_window(comb(), (F(0), F(1)), weight=0.25)
        (term,) = w.provenance
        assert term.weight == 0.25
        assert term.eps_class == 0


class TestTranslateModulate:
    def base(self):
        return restrict_window(comb(), (F(-3), F(3)))

    def test_identity(self):
        b = self.base()
        same = translate_modulate(b)
        assert same.window == b.window
        assert same.atoms == b.atoms

    def test_irrational_shift_widens_window(self):
        eps1 = SymbolicPosition(F(0), 1)
        shifted = translate_modulate(self.base(), shift=eps1)
        assert shifted.window == (F(-3), F(4))
        assert len(shifted) == 7
        assert all(a.position.eps_class == 1 for a in shifted.atoms)

    def test_noncommutation_ratio(self):
        # M_a T_r = exp(2 pi i a r) T_r M_a
        b = self.base()
        a = SymbolicPosition(F(1, 3))
        r = SymbolicPosition(F(1, 4))
        after = translate_modulate(b, shift=r, mod_freq=a, modulate_before_shift=False)
        before = translate_modulate(b, shift=r, mod_freq=a, modulate_before_shift=True)
        ratio = cmath.exp(2j * cmath.pi / 12)
        for x, y in zip(after.atoms, before.atoms):
            assert abs(x.coeff - y.coeff * ratio) < 1e-13

    def test_matches_restrict_with_same_operator(self):
        eps2 = SymbolicPosition(F(0), 2)
        via_restrict = restrict_window(
            comb(), (F(-3), F(4)), shift=eps2, mod_freq=eps2, mod_sign=-1
        )
        via_op = translate_modulate(
            restrict_window(comb(), (F(-3), F(3))),
            shift=eps2,
            mod_freq=eps2,
            mod_sign=-1,
        )
        assert via_op.window == via_restrict.window
        assert len(via_op) == len(via_restrict)
        for x, y in zip(via_op.atoms, via_restrict.atoms):
            assert x.position == y.position
            assert abs(x.coeff - y.coeff) < 1e-13

    def test_two_irrational_shifts_rejected(self):
        eps1 = SymbolicPosition(F(0), 1)
        eps2 = SymbolicPosition(F(0), 2)
        shifted = translate_modulate(self.base(), shift=eps1)
        with pytest.raises(ValueError):
            translate_modulate(shifted, shift=eps2)

    def test_pre_shift_modulation_after_shift_rejected(self):
        shifted = restrict_window(comb(), (F(0), F(3)), shift=SymbolicPosition(F(1, 2)))
        with pytest.raises(ValueError):
            translate_modulate(
                shifted,
                mod_freq=SymbolicPosition(F(1, 5)),
                modulate_before_shift=True,
            )

    def test_shifting_modulated_term_rejected(self):
        modulated = restrict_window(
            comb(), (F(0), F(3)), mod_freq=SymbolicPosition(F(1, 3))
        )
        with pytest.raises(ValueError):
            translate_modulate(modulated, shift=SymbolicPosition(F(1, 2)))
        # the identity composition still passes through
        kept = translate_modulate(modulated)
        assert kept.provenance == modulated.provenance


class TestOverlay:
    def test_merge_and_sort(self):
        w = (F(0), F(2))
        a = restrict_window(comb(), w)
        b = restrict_window(comb(F(1, 2)), w, weight=0.5)
        merged = overlay([a, b])
        positions = [at.position.rational for at in merged.atoms]
        assert positions == [F(0), F(1, 2), F(1), F(3, 2), F(2)]
        by_pos = {at.position.rational: at.coeff for at in merged.atoms}
        assert by_pos[F(0)] == 1.5
        assert by_pos[F(1, 2)] == 0.5

    def test_cancellation(self):
        w = (F(0), F(2))
        a = restrict_window(comb(), w)
        b = restrict_window(
            PeriodicLatticeMeasure(spacing=F(1), coeffs=np.array([-1.0])), w
        )
        assert len(overlay([a, b])) == 0

    def test_window_mismatch(self):
        a = restrict_window(comb(), (F(0), F(1)))
        b = restrict_window(comb(), (F(0), F(2)))
        with pytest.raises(ValueError):
            overlay([a, b])
        with pytest.raises(ValueError):
            overlay([])

    def test_post_merge_drop(self):
        pos = SymbolicPosition(F(1, 2))
        big = WindowedMeasure(window=(F(0), F(1)), atoms=(Atom(pos, 1.0 + 0j),))
        tiny = WindowedMeasure(
            window=(F(0), F(1)),
            atoms=(
                Atom(pos, -1.0 + 0j),
                Atom(SymbolicPosition(F(0)), 1e-20 + 0j),
                Atom(SymbolicPosition(F(1)), 2.0 + 0j),
            ),
        )
        merged = overlay([big, tiny])
        # exact cancellation at 1/2 and the 1e-20 atom both vanish
        assert [a.position.rational for a in merged.atoms] == [F(1)]


class TestVariation:
    def test_unit_variation_hand_cases(self):
        assert unit_variation(comb()) == 1.0
        assert unit_variation(
            PeriodicLatticeMeasure(spacing=F(1, 2), coeffs=np.array([1.0, 1.0]))
        ) == 2.0
        assert unit_variation(
            PeriodicLatticeMeasure(spacing=F(1), coeffs=np.array([3.0, 1.0]))
        ) == 3.0
        assert unit_variation(
            PeriodicLatticeMeasure(spacing=F(1, 3), coeffs=np.array([1.0, 2.0, 3.0]))
        ) == 6.0
        assert unit_variation(
            PeriodicLatticeMeasure(
                spacing=F(1, 2), coeffs=np.array([1.0, 10.0, 2.0, 3.0])
            )
        ) == 12.0

    def test_unit_variation_wide_spacing(self):
        # spacing 2/3: a unit window holds at most two consecutive atoms
        m = PeriodicLatticeMeasure(spacing=F(2, 3), coeffs=np.array([1.0, 5.0]))
        assert unit_variation(m) == 6.0

    @settings(max_examples=30, deadline=None)
    @given(
        st.lists(
            st.floats(min_value=-8, max_value=8, allow_nan=False),
            min_size=1,
            max_size=6,
        ),
        st.sampled_from([F(1, 4), F(1, 3), F(1, 2), F(2, 3), F(1)]),
    )
    def test_unit_variation_dominates_brute_scan(self, mags, spacing):
        m = PeriodicLatticeMeasure(spacing=spacing, coeffs=np.array(mags))
        exact = unit_variation(m)
        denom = spacing.denominator * 4
        period_len = m.real_period
        positions = [spacing * k for k in range(-len(mags), 8 * len(mags))]
        coeff_at = {p: abs(mags[k % len(mags)]) for k, p in zip(range(-len(mags), 8 * len(mags)), positions)}
        best = 0.0
        for j in range(int(period_len * denom) + 1):
            t = F(j, denom)
            s = sum(c for p, c in coeff_at.items() if t <= p < t + 1)
            best = max(best, s)
        assert best <= exact + 1e-12
        assert abs(best - exact) < 1e-12

    def test_window_variation_half_open(self):
        w = restrict_window(comb(F(1, 2)), (F(0), F(1)))
        assert len(w) == 3
        # [0, 1) takes the atoms at 0 and 1/2, never all three
        assert window_variation(w) == 2.0

    def test_window_variation_symbolic_anchors(self):
        eps1 = SymbolicPosition(F(0), 1)
        wm = WindowedMeasure(
            window=(F(0), F(2)),
            atoms=(Atom(eps1, 1.0 + 0j), Atom(SymbolicPosition(F(1)), 1.0 + 0j)),
        )
        # the window [eps_1, eps_1 + 1) holds both atoms since eps_1 < 1 < eps_1 + 1
        assert window_variation(wm) == 2.0

    def test_window_variation_empty(self):
        empty = WindowedMeasure(window=(F(0), F(1)), atoms=())
        assert window_variation(empty) == 0.0


class TestRecords:
    def test_round_trip(self):
        w = restrict_window(
            comb(F(1, 4)),
            (F(0), F(2)),
            shift=SymbolicPosition(F(1, 8), 2),
            mod_freq=SymbolicPosition(F(0), 2),
        )
        records = atoms_to_records(w)
        back = records_to_atoms(records)
        assert back == w.atoms

    def test_record_fields(self):
        w = restrict_window(comb(F(1, 3)), (F(1, 3), F(1, 3)))
        (rec,) = atoms_to_records(w)
        assert rec["position_rational"] == "1/3"
        assert rec["class"] == 0
        digits = sum(ch.isdigit() for ch in rec["position_float"])
        assert digits >= 30
        assert rec["coeff_re"] == 1.0 and rec["coeff_im"] == 0.0
