"""Tests for module shapes, slots and sparse elements."""

from __future__ import annotations

import pytest


class TestComponentShape:
    """Tests for ComponentShape."""

    def test_weights_of_strings(self):
        """Head weights follow M(r), T(n) and V(n)."""
        from qcompletion.algebra.modules import ComponentShape

        assert ComponentShape.verma(-4).head_weight("m") == -4
        assert ComponentShape.tmod(2).head_weight("v") == 2
        assert ComponentShape.tmod(2).head_weight("z") == -4
        assert ComponentShape.findim(3).head_weight("u") == 3

    def test_findim_string_is_finite(self):
        """Only V(n) strings stop, at k = n."""
        from qcompletion.algebra.modules import ComponentShape

        assert ComponentShape.findim(3).max_k("u") == 3
        assert ComponentShape.verma(0).max_k("m") is None
        assert ComponentShape.tmod(1).max_k("z") is None

    def test_negative_t_parameter_rejected(self):
        """T(n) and V(n) need n >= 0."""
        from qcompletion.algebra.modules import ComponentShape
        from qcompletion.core.errors import ShapeError

        with pytest.raises(ShapeError):
            ComponentShape.tmod(-1)
        with pytest.raises(ShapeError):
            ComponentShape.findim(-2)

    def test_foreign_tag_rejected(self):
        """Asking a Verma summand for a z string raises ShapeError."""
        from qcompletion.algebra.modules import ComponentShape
        from qcompletion.core.errors import ShapeError

        with pytest.raises(ShapeError):
            ComponentShape.verma(1).head_weight("z")

    def test_blocks(self):
        """M(r) and M(-r-2) share the block max(r, -r-2)."""
        from qcompletion.algebra.modules import ComponentShape

        assert ComponentShape.verma(1).block == 1
        assert ComponentShape.verma(-3).block == 1
        assert ComponentShape.verma(-1).block == -1
        assert ComponentShape.tmod(4).block == 4

    def test_completeness(self):
        """T(n) and M(r), r >= -1, are complete; M(-2) and V(n) are not."""
        from qcompletion.algebra.modules import ComponentShape

        assert ComponentShape.tmod(0).is_complete()
        assert ComponentShape.verma(-1).is_complete()
        assert not ComponentShape.verma(-2).is_complete()
        assert not ComponentShape.findim(1).is_complete()


class TestShapeGrammar:
    """Tests for parse_shape and format_shape."""

    def test_parse_sum(self, shape_of):
        """M(r), T(n) and V(n) summands joined by +."""
        from qcompletion.algebra.modules import ComponentShape

        shape = shape_of("M(-3) + T(0)+V(2)")
        assert shape.components == (
            ComponentShape.verma(-3),
            ComponentShape.tmod(0),
            ComponentShape.findim(2),
        )

    def test_format_round_trip(self, shape_of):
        """format_shape prints the grammar back."""
        from qcompletion.algebra.modules import format_shape

        assert format_shape(shape_of("M(1)+T(1)+M(-3)")) == "M(1)+T(1)+M(-3)"

    @pytest.mark.parametrize("text", ["", "M(1)+", "X(2)", "T(-1)", "M(1", "M(a)"])
    def test_parse_errors(self, shape_of, text):
        """Malformed shapes raise ShapeError."""
        from qcompletion.core.errors import ShapeError

        with pytest.raises(ShapeError):
            shape_of(text)

    def test_records(self, shape_of):
        """Shapes serialize to kind/parameter records."""
        from qcompletion.algebra.modules import ModuleShape

        shape = shape_of("M(-4)+T(1)")
        records = shape.to_records()
        assert records == [
            {"kind": "Verma", "parameter": -4},
            {"kind": "T", "parameter": 1},
        ]
        assert ModuleShape.from_records(records) == shape


class TestWeightSpaces:
    """Tests for weight_slots and covered_weights."""

    def test_t_module_weight_space(self, shape_of):
        """T(1) at weight -3 holds f^(2) v and z."""
        from qcompletion.algebra.modules import Slot, weight_slots

        assert weight_slots(shape_of("T(1)"), -3) == [Slot(0, "v", 2), Slot(0, "z", 0)]

    def test_parity_and_height(self, shape_of):
        """Weights above the head or of the wrong parity are empty."""
        from qcompletion.algebra.modules import weight_slots

        shape = shape_of("M(2)")
        assert weight_slots(shape, 4) == []
        assert weight_slots(shape, 1) == []

    def test_findim_weights(self, shape_of):
        """V(2) has weights 2, 0, -2 only."""
        from qcompletion.algebra.modules import weight_slots

        shape = shape_of("V(2)")
        assert [len(weight_slots(shape, w)) for w in (2, 0, -2, -4)] == [1, 1, 1, 0]

    def test_covered_weights(self, shape_of):
        """Covered weights stop where a slot would pass the window."""
        from qcompletion.algebra.modules import covered_weights

        assert covered_weights(shape_of("M(0)"), 2) == [0, -2, -4]


class TestElement:
    """Tests for sparse elements."""

    def test_zero_terms_dropped(self):
        """Cancelling terms leave the zero element."""
        from qcompletion.algebra.modules import Element

        x = Element.of(0, "m", 1) - Element.of(0, "m", 1)
        assert x.is_zero
        assert x == Element.zero()

    def test_terms_sorted(self):
        """Terms are kept in slot order, so equal sums compare equal."""
        from qcompletion.algebra.modules import Element

        a = Element.of(0, "m", 2) + Element.of(0, "m", 0)
        b = Element.of(0, "m", 0) + Element.of(0, "m", 2)
        assert a == b

    def test_scale_by_zero(self):
        """Scaling by zero gives zero."""
        from qcompletion.algebra.modules import Element

        assert Element.of(0, "v", 1).scale(0).is_zero

    def test_weight(self, shape_of):
        """Weight vectors report their weight; mixed ones report None."""
        from qcompletion.algebra.modules import Element

        shape = shape_of("T(1)")
        x = Element.of(0, "v", 2) + Element.of(0, "z", 0)
        assert x.weight(shape) == -3
        assert (x + Element.of(0, "v", 0)).weight(shape) is None

    def test_records(self):
        """Elements serialize to (component, tag, k, coefficient) records."""
        from qcompletion.algebra.modules import Element
        from qcompletion.algebra.qarith import ONE, Q

        x = Element.of(0, "m", 2, Q) + Element.of(1, "z", 0, ONE + Q)
        records = x.to_records()
        assert records == [[0, "m", 2, "q"], [1, "z", 0, "q + 1"]]
        assert Element.from_records(records) == x

    def test_check_slot(self, shape_of):
        """Slots outside the shape raise ShapeError."""
        from qcompletion.algebra.modules import Slot
        from qcompletion.core.errors import ShapeError

        shape = shape_of("V(1)+M(0)")
        with pytest.raises(ShapeError):
            shape.check_slot(Slot(0, "u", 2))
        with pytest.raises(ShapeError):
            shape.check_slot(Slot(2, "m", 0))
        with pytest.raises(ShapeError):
            shape.check_slot(Slot(1, "v", 0))
