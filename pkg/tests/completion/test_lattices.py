"""Tests for completed crystal lattices of Verma modules."""

from __future__ import annotations

import pytest

from qcompletion.algebra.modules import Element
from qcompletion.algebra.qarith import ONE, Q, RatFunc


class TestCompletedVermaLattice:
    """Tests for the two constructions of the completed lattice."""

    @pytest.mark.parametrize("n", [0, 1, 2, 3])
    def test_routes_agree(self, n, small_window):
        """The generator and S_n constructions give the same lattice."""
        from qcompletion.completion.lattices import complete_verma_lattice, sn_complete_lattice
        from qcompletion.crystal.lattice import lattice_equal

        direct = complete_verma_lattice(n, small_window)
        assert lattice_equal(direct, sn_complete_lattice(n, small_window))

    @pytest.mark.parametrize("n", [0, 1, 2, 3])
    def test_normalized_generators(self, n, small_window):
        """Unit-normalized generators span the same lattice."""
        from qcompletion.completion.lattices import (
            complete_verma_lattice,
            normalized_verma_lattice,
        )
        from qcompletion.crystal.lattice import lattice_equal

        direct = complete_verma_lattice(n, small_window)
        assert lattice_equal(direct, normalized_verma_lattice(n, small_window))

    def test_sn_compare_four(self):
        """For n = 4 the two routes agree on a wider window."""
        from qcompletion.completion.lattices import complete_verma_lattice, sn_complete_lattice
        from qcompletion.crystal.lattice import lattice_equal

        assert lattice_equal(complete_verma_lattice(4, 14), sn_complete_lattice(4, 14))

    @pytest.mark.parametrize("n", [0, 2])
    def test_is_crystal_lattice(self, n, small_window):
        """The completed lattice is a crystal lattice of M(n)."""
        from qcompletion.completion.lattices import complete_verma_lattice
        from qcompletion.crystal.basis import verify_crystal_lattice

        assert verify_crystal_lattice(complete_verma_lattice(n, small_window)).passed

    @pytest.mark.parametrize("n", [0, 1, 3])
    def test_bottom_generator(self, n, small_window):
        """m0 lies in the completed lattice and q^-1 m0 does not."""
        from qcompletion.completion.lattices import complete_verma_lattice

        lattice = complete_verma_lattice(n, small_window)
        m0 = Element.of(0, "m", n + 1)
        assert lattice.contains(m0)
        assert not lattice.contains(m0.scale(Q.inverse()))

    def test_sharp_lattice_is_not_crystal(self, small_window):
        """L# = sum A f^(k) m0 fails e~-stability."""
        from qcompletion.completion.lattices import sharp_lattice
        from qcompletion.crystal.basis import verify_crystal_lattice

        report = verify_crystal_lattice(sharp_lattice(2, small_window))
        assert not report.passed
        assert not report.condition("e_tilde_stable").passed

    def test_negative_n_rejected(self):
        """The completed lattice needs n >= 0."""
        from qcompletion.completion.lattices import complete_verma_lattice, sn_complete_lattice

        with pytest.raises(ValueError):
            complete_verma_lattice(-1)
        with pytest.raises(ValueError):
            sn_complete_lattice(-1)

    def test_tails_have_valuation_zero(self, small_window):
        """Completed lattices are diagonal with tail (0, 0)."""
        from qcompletion.completion.lattices import complete_verma_lattice
        from qcompletion.crystal.lattice import TailLaw

        law = complete_verma_lattice(2, small_window).tail_map[(0, "m")]
        assert law.same_lattice(TailLaw(0, 0))


class TestFactors:
    """Tests for the Delta and S_n scalars."""

    @pytest.mark.parametrize("n", [0, 1, 3])
    def test_lemma_units(self, n):
        """Every a* is a unit of A."""
        from qcompletion.completion.lattices import lemma_units

        units = lemma_units(n)
        assert len(units) == 2 * n + 3
        assert all(a.is_unit() for a in units)

    def test_s_n_below_top(self):
        """S_n f^(k) m0 = q^k (1 - q^(n+1))^-1 f^(k) m0 for k >= 0."""
        from qcompletion.completion.lattices import s_n_factor

        n = 2
        for k in range(4):
            expected = RatFunc.q_power(k) / (ONE - RatFunc.q_power(n + 1))
            assert s_n_factor(n, k) == expected

    def test_s_n_identity_above(self):
        """S_n is the identity on weights above -n-2."""
        from qcompletion.completion.lattices import s_n_factor

        assert s_n_factor(3, -2) == ONE

    def test_half_factors_invert(self):
        """(qt Delta)^(1/2) and (qt Delta)^(-1/2) are inverse."""
        from qcompletion.completion.lattices import half_factor, half_inverse_factor

        for k in range(-3, 4):
            assert half_factor(2, k) * half_inverse_factor(2, k) == ONE

    def test_half_factor_squares_to_delta(self):
        """(qt Delta)^(1/2) squared is q t Delta on m0."""
        from qcompletion.algebra.actions import act, act_delta
        from qcompletion.algebra.modules import AlgebraGen, parse_shape
        from qcompletion.completion.lattices import half_factor

        n = 2
        shape = parse_shape(f"M({-n - 2})")
        m0 = Element.of(0, "m")
        qt_delta = act(AlgebraGen.T, act_delta(m0, shape), shape).scale(Q)
        assert qt_delta == m0.scale(half_factor(n, 0) ** 2)


class TestCompleteLattice:
    """Tests for completing standard crystal bases."""

    def test_verma_completed(self, shape_of, small_window):
        """The standard basis of M(-4) completes to a lattice of M(2)."""
        from qcompletion.completion.lattices import complete_lattice, complete_verma_lattice
        from qcompletion.crystal.basis import standard_lattice
        from qcompletion.crystal.lattice import lattice_equal

        completed = complete_lattice(standard_lattice(shape_of("M(-4)"), small_window))
        assert completed.shape == shape_of("M(2)")
        assert lattice_equal(completed.lattice, complete_verma_lattice(2, small_window))

    def test_complete_module_unchanged(self, shape_of, small_window):
        """Complete summands keep their lattice."""
        from qcompletion.completion.lattices import complete_lattice
        from qcompletion.crystal.basis import standard_lattice
        from qcompletion.crystal.lattice import lattice_equal

        basis = standard_lattice(shape_of("M(-1)+T(2)"), small_window)
        assert lattice_equal(complete_lattice(basis).lattice, basis.lattice)

    def test_sum_completed_componentwise(self, shape_of, small_window):
        """M(-3)+T(0) completes on the first summand only."""
        from qcompletion.completion.lattices import complete_lattice
        from qcompletion.crystal.basis import standard_lattice

        completed = complete_lattice(standard_lattice(shape_of("M(-3)+T(0)"), small_window))
        assert completed.shape == shape_of("M(1)+T(0)")
        assert completed.lattice.contains(Element.of(1, "z", 3))

    def test_non_standard_rejected(self, shape_of, small_window):
        """Only the standard crystal lattice is completed."""
        from qcompletion.completion.lattices import complete_lattice
        from qcompletion.core.errors import NonStandardLatticeError
        from qcompletion.crystal.basis import CrystalBasis, standard_lattice

        basis = standard_lattice(shape_of("M(-4)"), small_window)
        scaled = CrystalBasis(basis.lattice.scaled(Q), basis.basis_reps)
        with pytest.raises(NonStandardLatticeError):
            complete_lattice(scaled)
