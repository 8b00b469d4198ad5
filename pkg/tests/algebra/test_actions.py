"""Tests for generator actions, Casimir, Kashiwara operators and completion of shapes."""

from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qcompletion.algebra.actions import act, act_power
from qcompletion.algebra.modules import AlgebraGen, Element, parse_shape
from qcompletion.algebra.qarith import ONE, Q, RatFunc, q_int

E, F, T, T_INV, E_PRIME = (
    AlgebraGen.E,
    AlgebraGen.F,
    AlgebraGen.T,
    AlgebraGen.T_INV,
    AlgebraGen.E_PRIME,
)

BQ_SHAPES = ["M(-4)", "M(-1)", "M(2)", "T(0)", "T(2)", "M(1)+T(1)+M(-3)"]
ALL_SHAPES = BQ_SHAPES + ["V(3)", "V(0)+M(0)"]


def _random(seed: int, text: str) -> Element:
    from qcompletion.procedures.identities import random_element

    return random_element(np.random.default_rng(seed), parse_shape(text))


class TestGeneratorRules:
    """Tests for the closed-form rules on single slots."""

    def test_e_prime_on_divided_power(self, shape_of):
        """e' f^(3) m = q^-2 f^(2) m."""
        shape = shape_of("M(-4)")
        assert act(E_PRIME, Element.of(0, "m", 3), shape) == Element.of(0, "m", 2, Q**-2)

    def test_e_kills_highest_weight(self, shape_of):
        """e m = 0."""
        assert act(E, Element.of(0, "m"), shape_of("M(-4)")).is_zero

    def test_e_on_verma_string(self, shape_of):
        """e f^(2) m = [-5] f m in M(-4)."""
        shape = shape_of("M(-4)")
        assert act(E, Element.of(0, "m", 2), shape) == Element.of(0, "m", 1, q_int(-5))

    def test_e_on_z(self, shape_of):
        """e z = f^(n) v in T(n)."""
        shape = shape_of("T(2)")
        assert act(E, Element.of(0, "z"), shape) == Element.of(0, "v", 2)

    def test_f_past_top_of_findim(self, shape_of):
        """f f^(n) u = 0 in V(n)."""
        shape = shape_of("V(2)")
        assert act(F, Element.of(0, "u", 2), shape).is_zero
        assert act(F, Element.of(0, "u", 1), shape) == Element.of(0, "u", 2, q_int(2))

    def test_t_scales_by_weight(self, shape_of):
        """t f^(k) g = q^wt f^(k) g."""
        shape = shape_of("T(1)")
        assert act(T, Element.of(0, "z", 1), shape) == Element.of(0, "z", 1, Q**-5)
        assert act(T_INV, Element.of(0, "v"), shape) == Element.of(0, "v", 0, Q**-1)

    def test_e_prime_on_findim_raises(self, shape_of):
        """e' is not defined on V(n)."""
        from qcompletion.core.errors import ShapeError

        with pytest.raises(ShapeError):
            act(E_PRIME, Element.of(0, "u", 1), shape_of("V(2)"))

    def test_slot_outside_shape_raises(self, shape_of):
        """Slots past the top of V(n) are rejected."""
        from qcompletion.core.errors import ShapeError

        with pytest.raises(ShapeError):
            act(F, Element.of(0, "u", 3), shape_of("V(2)"))

    @pytest.mark.parametrize("r", [-4, -1, 0, 3])
    @pytest.mark.parametrize("k", [1, 2, 4])
    def test_e_matches_commutator_expansion(self, shape_of, r, k):
        """e f^k m equals sum_j f^j [e, f] f^(k-1-j) m."""
        shape = shape_of(f"M({r})")
        head = Element.of(0, "m")
        expected = Element.zero()
        for j in range(k):
            y = act_power(F, k - 1 - j, head, shape)
            y = (act(T, y, shape) - act(T_INV, y, shape)).scale(ONE / (Q - Q.inverse()))
            expected = expected + act_power(F, j, y, shape)
        assert act(E, act_power(F, k, head, shape), shape) == expected


class TestRelations:
    """Relations checked on random elements."""

    @settings(max_examples=25, deadline=None)
    @given(st.integers(0, 10_000), st.sampled_from(ALL_SHAPES))
    def test_defining_relations(self, seed, text):
        """t e = q^2 e t, t f = q^-2 f t and [e, f] = (t - t^-1)/(q - q^-1)."""
        shape = parse_shape(text)
        x = _random(seed, text)

        def a(g, y):
            return act(g, y, shape)

        assert a(T, a(E, x)) == a(E, a(T, x)).scale(Q * Q)
        assert a(T, a(F, x)) == a(F, a(T, x)).scale(Q**-2)
        assert a(T, a(T_INV, x)) == x
        commutator = a(E, a(F, x)) - a(F, a(E, x))
        assert commutator == (a(T, x) - a(T_INV, x)).scale(ONE / (Q - Q.inverse()))

    @settings(max_examples=25, deadline=None)
    @given(st.integers(0, 10_000), st.sampled_from(BQ_SHAPES))
    def test_kashiwara_relation(self, seed, text):
        """e' f = q^-2 f e' + 1."""
        shape = parse_shape(text)
        x = _random(seed, text)
        lhs = act(E_PRIME, act(F, x, shape), shape)
        rhs = act(F, act(E_PRIME, x, shape), shape).scale(Q**-2) + x
        assert lhs == rhs

    @settings(max_examples=25, deadline=None)
    @given(st.integers(0, 10_000), st.sampled_from(ALL_SHAPES))
    def test_casimir_central(self, seed, text):
        """C commutes with e and f."""
        from qcompletion.algebra.actions import act_casimir

        shape = parse_shape(text)
        x = _random(seed, text)
        for g in (E, F):
            assert act_casimir(act(g, x, shape), shape) == act(g, act_casimir(x, shape), shape)

    def test_e_prime_on_f_power(self, shape_of):
        """e' f^p m = q^-(p-1) [p] f^(p-1) m."""
        shape = shape_of("M(-2)")
        head = Element.of(0, "m")
        for p in range(1, 7):
            x = act_power(F, p, head, shape)
            expected = act_power(F, p - 1, head, shape).scale(Q ** -(p - 1) * q_int(p))
            assert act(E_PRIME, x, shape) == expected


class TestCasimir:
    """Tests for C and Delta."""

    def test_casimir_eigenvalue_on_verma(self, shape_of):
        """C f^(5) m = c_3 f^(5) m in M(3)."""
        from qcompletion.algebra.actions import act_casimir, casimir_value

        shape = shape_of("M(3)")
        x = Element.of(0, "m", 5)
        assert act_casimir(x, shape) == x.scale(casimir_value(3))

    def test_t_module_is_not_semisimple(self, shape_of):
        """(C - c_1) z != 0 but (C - c_1)^2 z = 0 in T(1)."""
        from qcompletion.algebra.actions import act_casimir, casimir_value

        shape = shape_of("T(1)")
        c = casimir_value(1)

        def shifted(y):
            return act_casimir(y, shape) - y.scale(c)

        z = Element.of(0, "z")
        assert not shifted(z).is_zero
        assert shifted(shifted(z)).is_zero

    def test_t_module_top_relation(self, shape_of):
        """e^(n+2) z = 0 in T(n)."""
        for n in range(4):
            shape = shape_of(f"T({n})")
            assert act_power(E, n + 2, Element.of(0, "z"), shape).is_zero

    def test_delta_on_highest_weight(self, shape_of):
        """Delta m = (q^-3 + q^3 - 2) m in M(-4)."""
        from qcompletion.algebra.actions import act_delta

        m = Element.of(0, "m")
        expected = Q**-3 + Q**3 - RatFunc.from_int(2)
        assert act_delta(m, shape_of("M(-4)")) == m.scale(expected)

    def test_same_casimir_in_a_block(self):
        """M(1) and M(-3) share c_1."""
        from qcompletion.algebra.actions import casimir_value

        assert casimir_value(1) == casimir_value(-3)


class TestStrings:
    """Tests for b_decompose, Kashiwara operators and kernels."""

    def test_b_decompose_verma(self, shape_of):
        """f^(2) m + m splits as [(2, m), (0, m)]."""
        from qcompletion.algebra.actions import b_decompose

        x = Element.of(0, "m", 2) + Element.of(0, "m")
        m = Element.of(0, "m")
        assert b_decompose(x, shape_of("M(-4)")) == [(2, m), (0, m)]

    def test_b_decompose_t_module(self, shape_of):
        """f v splits as [(1, v)] in T(n)."""
        from qcompletion.algebra.actions import b_decompose

        x = act(F, Element.of(0, "v"), shape_of("T(2)"))
        assert b_decompose(x, shape_of("T(2)")) == [(1, Element.of(0, "v"))]

    def test_b_decompose_rejects_findim(self, shape_of):
        """Shapes with V(n) have no B_q-structure."""
        from qcompletion.algebra.actions import b_decompose
        from qcompletion.core.errors import ShapeError

        with pytest.raises(ShapeError):
            b_decompose(Element.of(0, "u"), shape_of("V(1)"))

    def test_kashiwara_shifts(self, shape_of):
        """f~ f^(4) m = f^(5) m and e~ z = 0."""
        from qcompletion.algebra.actions import Kashiwara, kashiwara

        assert kashiwara(Kashiwara.F_TILDE, Element.of(0, "m", 4), shape_of("M(0)")) == (
            Element.of(0, "m", 5)
        )
        assert kashiwara(Kashiwara.E_TILDE, Element.of(0, "z"), shape_of("T(1)")).is_zero

    def test_kashiwara_on_findim(self, shape_of):
        """f~ f^(n) u = 0 in V(n)."""
        from qcompletion.algebra.actions import Kashiwara, kashiwara

        assert kashiwara(Kashiwara.F_TILDE, Element.of(0, "u", 2), shape_of("V(2)")).is_zero

    @settings(max_examples=25, deadline=None)
    @given(st.integers(0, 10_000), st.sampled_from(BQ_SHAPES))
    def test_e_tilde_undoes_f_tilde(self, seed, text):
        """e~ f~ x = x on B_q shapes."""
        from qcompletion.algebra.actions import Kashiwara, kashiwara

        shape = parse_shape(text)
        x = _random(seed, text)
        up = kashiwara(Kashiwara.F_TILDE, x, shape)
        assert kashiwara(Kashiwara.E_TILDE, up, shape) == x

    def test_ker_e_verma_top(self, shape_of):
        """Ker e at weight -4 of M(-4) is spanned by m."""
        from qcompletion.algebra.actions import ker_e

        assert ker_e(shape_of("M(-4)"), -4) == [Element.of(0, "m")]

    def test_ker_e_t_module(self, shape_of):
        """Ker e at weight -3 of T(1) is spanned by f^(2) v."""
        from qcompletion.algebra.actions import ker_e
        from qcompletion.algebra.modules import Slot

        basis = ker_e(shape_of("T(1)"), -3)
        assert len(basis) == 1
        assert basis[0].slots() == [Slot(0, "v", 2)]

    def test_ker_e_prime_t_module(self, shape_of):
        """Ker e' at weight -3 of T(1) is spanned by z."""
        from qcompletion.algebra.actions import ker_e_prime

        assert ker_e_prime(shape_of("T(1)"), -3) == [Element.of(0, "z")]

    def test_divided_power_matches_f_power(self, shape_of):
        """f^(k) = f^k / [k]!."""
        from qcompletion.algebra.actions import divided_power
        from qcompletion.algebra.qarith import q_factorial

        shape = shape_of("M(-3)")
        x = Element.of(0, "m", 1)
        for k in range(5):
            expected = act_power(F, k, x, shape).scale(ONE / q_factorial(k))
            assert divided_power(k, x, shape) == expected


class TestCompletionModule:
    """Tests for completion_module and the embedding M -> C(M)."""

    def test_complete_verma_unchanged(self, shape_of):
        """C(M(-1)) = M(-1)."""
        from qcompletion.algebra.actions import completion_module

        target, emb = completion_module(shape_of("M(-1)"))
        assert target == shape_of("M(-1)")
        assert emb(Element.of(0, "m", 3)) == Element.of(0, "m", 3)

    def test_lower_verma_completed(self, shape_of):
        """C(M(-3)) = M(1) and m goes to f^(2) m~."""
        from qcompletion.algebra.actions import completion_module

        target, emb = completion_module(shape_of("M(-3)"))
        assert target == shape_of("M(1)")
        assert emb(Element.of(0, "m")) == Element.of(0, "m", 2)

    def test_embedding_coefficients(self, shape_of):
        """f^(k) m goes to binom(n+1+k, k) f^(n+1+k) m~ and pulls back."""
        from qcompletion.algebra.actions import completion_module
        from qcompletion.algebra.qarith import q_binomial

        _, emb = completion_module(shape_of("M(-4)"))
        x = Element.of(0, "m", 2)
        y = emb(x)
        assert y == Element.of(0, "m", 5, q_binomial(5, 2))
        assert emb.pullback(y) == x
        assert emb.pullback(Element.of(0, "m", 1)) is None

    def test_embedding_commutes_with_f_and_e(self, shape_of):
        """The embedding is a U_q map."""
        from qcompletion.algebra.actions import completion_module

        source = shape_of("M(-4)+T(0)")
        target, emb = completion_module(source)
        x = Element.of(0, "m", 2) + Element.of(1, "z", 1, Q)
        for g in (E, F, T):
            assert emb(act(g, x, source)) == act(g, emb(x), target)

    def test_t_module_is_complete(self, shape_of):
        """T(5) is complete; M(-2) and V(1) are not."""
        from qcompletion.algebra.actions import is_complete_module

        assert is_complete_module(shape_of("T(5)"))
        assert is_complete_module(shape_of("M(-1)+M(3)"))
        assert not is_complete_module(shape_of("M(-2)"))
        assert not is_complete_module(shape_of("V(1)"))

    def test_quotient_shape_and_projection(self, shape_of):
        """C(M(-4))/M(-4) = V(2), with f^(k) m~ projecting to f^(k) u for k <= 2."""
        from qcompletion.algebra.actions import completion_module

        _, emb = completion_module(shape_of("T(0)+M(-4)"))
        assert emb.quotient_shape() == shape_of("V(2)")
        y = Element.of(1, "m", 1) + Element.of(1, "m", 3) + Element.of(0, "v")
        assert emb.project(y) == Element.of(0, "u", 1)
        assert emb.lift(Element.of(0, "u", 1)) == Element.of(1, "m", 1)
