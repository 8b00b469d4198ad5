"""Tests for twisted presentations and their validity conditions."""

from __future__ import annotations

import numpy as np
import pytest

from qcompletion.algebra.modules import Element
from qcompletion.algebra.qarith import ONE, Q


def _twist(shape_of, text: str, images: dict):
    from qcompletion.decomp.twisted import TwistedPresentation

    return TwistedPresentation.from_mapping(shape_of(text), images)


class TestTwistedPresentation:
    """Tests for building and serializing presentations."""

    def test_identity(self, shape_of):
        """An untwisted presentation uses the canonical frame."""
        from qcompletion.decomp.twisted import TwistedPresentation

        presentation = TwistedPresentation.identity(shape_of("M(-4)+T(1)"))
        assert presentation.is_identity
        assert "untwisted" in str(presentation)

    def test_from_dict(self, shape_of):
        """The twist file layout names a shape and generator images."""
        from qcompletion.decomp.twisted import TwistedPresentation

        data = {
            "shape": "T(1)",
            "generators": [
                {"component": 0, "tag": "z", "image": [[0, "z", 0, "1"], [0, "v", 2, "q"]]}
            ],
        }
        presentation = TwistedPresentation.from_dict(data)
        assert presentation.base == shape_of("T(1)")
        assert presentation.images == (((0, "z"), Element.of(0, "z") + Element.of(0, "v", 2, Q)),)
        assert TwistedPresentation.from_dict(presentation.to_dict()) == presentation

    def test_from_dict_unknown_string(self):
        """Images for strings the shape lacks are rejected."""
        from qcompletion.core.errors import ShapeError
        from qcompletion.decomp.twisted import TwistedPresentation

        data = {"shape": "T(1)", "generators": [{"component": 0, "tag": "m", "image": []}]}
        with pytest.raises(ShapeError):
            TwistedPresentation.from_dict(data)

    def test_twisted_e_prime(self, shape_of):
        """e' kills the new generator and lowers its f-string."""
        from qcompletion.algebra.actions import divided_power

        z_image = Element.of(0, "z") + Element.of(0, "v", 2)
        presentation = _twist(shape_of, "T(1)", {(0, "z"): z_image})
        assert presentation.e_prime(z_image).is_zero
        lowered = presentation.e_prime(divided_power(2, z_image, shape_of("T(1)")))
        assert lowered == divided_power(1, z_image, shape_of("T(1)")).scale(Q.inverse())

    def test_change_of_basis_columns(self, shape_of):
        """Columns of the change of basis are the frame vectors."""
        z_image = Element.of(0, "z") + Element.of(0, "v", 2, Q)
        presentation = _twist(shape_of, "T(1)", {(0, "z"): z_image})
        slots, matrix = presentation.change_of_basis(-3)
        assert [str(s) for s in slots] == ["f^(2)v0", "f^(0)z0"]
        assert matrix == [[ONE, Q], [Q - Q, ONE]]


class TestValidateTwist:
    """Tests for the validity conditions."""

    def test_valid_t_twist(self, shape_of):
        """z -> z + f^(2) v is a valid twist of T(1)."""
        from qcompletion.decomp.twisted import validate_twist

        z_image = Element.of(0, "z") + Element.of(0, "v", 2)
        report = validate_twist(_twist(shape_of, "T(1)", {(0, "z"): z_image}))
        assert report.passed, str(report)
        assert [c.name for c in report.conditions] == [
            "invertible",
            "f_compatible",
            "kernel_split",
            "t_generators",
        ]

    def test_wrong_weight(self, shape_of):
        """An image of the wrong weight fails invertibility."""
        from qcompletion.core.errors import TwistError
        from qcompletion.decomp.twisted import check_twist, validate_twist

        presentation = _twist(shape_of, "T(1)", {(0, "z"): Element.of(0, "v", 1)})
        assert not validate_twist(presentation).condition("invertible").passed
        with pytest.raises(TwistError) as info:
            check_twist(presentation)
        assert info.value.condition == "invertible"

    def test_dependent_images(self, shape_of):
        """Images that collapse a weight space are not invertible."""
        from qcompletion.decomp.twisted import validate_twist

        presentation = _twist(shape_of, "T(1)", {(0, "z"): Element.of(0, "v", 2)})
        report = validate_twist(presentation)
        assert not report.condition("invertible").passed
        assert "span" in report.condition("invertible").detail

    def test_kernel_split_failure(self, shape_of):
        """Moving u of M(-2) off Ker e with f^(2) m of M(2) breaks the kernel split."""
        from qcompletion.decomp.twisted import validate_twist

        u_image = Element.of(1, "m") + Element.of(0, "m", 2)
        report = validate_twist(_twist(shape_of, "M(2)+M(-2)", {(1, "m"): u_image}))
        assert report.condition("invertible").passed
        assert not report.condition("kernel_split").passed

    def test_t_generator_failure(self, shape_of):
        """v -> v + m breaks e z = f^(n) v for every T(1) copy."""
        from qcompletion.decomp.twisted import good_t_blocks, validate_twist

        presentation = _twist(
            shape_of, "T(1)+M(1)", {(0, "v"): Element.of(0, "v") + Element.of(1, "m")}
        )
        assert good_t_blocks(presentation) == []
        report = validate_twist(presentation)
        assert report.condition("kernel_split").passed
        assert not report.condition("t_generators").passed

    def test_default_window(self, shape_of):
        """The default window reaches below every block's bottom head."""
        from qcompletion.decomp.twisted import default_window

        assert default_window(shape_of("M(1)+T(1)+M(-3)")) == 6
        assert default_window(shape_of("M(-1)")) == 6


class TestRandomTwist:
    """Tests for random twist generation."""

    @pytest.mark.parametrize("seed", [0, 1, 7])
    def test_random_twists_are_valid(self, seed):
        """Random twists of the default shape pass every condition."""
        from qcompletion.decomp.twisted import random_twist, validate_twist

        presentation = random_twist(np.random.default_rng(seed))
        assert str(presentation.base) == "M(1)+T(1)+M(-3)"
        assert validate_twist(presentation).passed

    def test_reproducible(self, shape_of):
        """The same seed gives the same twist."""
        from qcompletion.decomp.twisted import random_twist

        shape = shape_of("M(0)+M(-2)+T(0)")
        first = random_twist(np.random.default_rng(11), shape)
        second = random_twist(np.random.default_rng(11), shape)
        assert first == second


class TestSpans:
    """Tests for span helpers."""

    def test_intersect_spans(self):
        """span(x, y) meets span(y + x, q z) in span(x + y)."""
        from qcompletion.decomp.twisted import intersect_spans, span_rank

        x, y, z = Element.of(0, "m", 1), Element.of(1, "m", 0), Element.of(2, "m", 0)
        common = intersect_spans([x, y], [x + y, z.scale(Q)])
        assert len(common) == 1
        assert span_rank(common + [x + y]) == 1

    def test_off_block(self, shape_of):
        """off_block keeps the summands outside the block."""
        from qcompletion.decomp.twisted import off_block

        shape = shape_of("M(1)+M(0)")
        x = Element.of(0, "m", 1) + Element.of(1, "m", 0)
        assert off_block(x, shape, 1) == Element.of(1, "m", 0)
