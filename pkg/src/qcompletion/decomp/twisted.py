"""Twisted presentations: a canonical U_q-module with a moved B_q-structure.

A presentation keeps the U_q-action of its base shape and replaces the
generator of each string by a new weight vector (its image). Ker e' is then
spanned by the images, and e' acts on f^(k) image by the standard string
formula. Strings that are not listed keep their canonical generator.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from qcompletion.algebra.actions import act, divided_power, ker_e
from qcompletion.algebra.frames import BqFrame, StringKey
from qcompletion.algebra.linalg import nullspace, rank
from qcompletion.algebra.modules import (
    TMOD,
    VERMA,
    AlgebraGen,
    Element,
    ModuleShape,
    Slot,
    covered_weights,
    parse_shape,
    weight_slots,
)
from qcompletion.algebra.qarith import ONE, Q, RatFunc, q_int
from qcompletion.core.errors import IsomorphismError, ShapeError, TwistError, WeightError
from qcompletion.crystal.basis import VerificationReport

log = logging.getLogger(__name__)
log.addHandler(logging.NullHandler())


@dataclass(frozen=True)
class TwistedPresentation:
    """A base shape with generator images defining its B_q-structure.

    Attributes:
        base: The U_q-module, in canonical slots.
        images: (string, new generator) pairs; each image has the weight of
            the string head.
    """

    base: ModuleShape
    images: Tuple[Tuple[StringKey, Element], ...] = ()

    @classmethod
    def identity(cls, shape: ModuleShape) -> "TwistedPresentation":
        return cls(shape, ())

    @classmethod
    def from_mapping(
        cls, shape: ModuleShape, images: Mapping[StringKey, Element]
    ) -> "TwistedPresentation":
        return cls(shape, tuple(sorted(images.items())))

    @property
    def frame(self) -> BqFrame:
        """The B_q-frame of the presentation.

        Raises:
            TwistError: If an image is not a vector of its string's head weight.
        """
        try:
            return BqFrame.from_mapping(self.base, dict(self.images))
        except (ShapeError, WeightError) as e:
            raise TwistError("weight_preserving", str(e)) from e

    def change_of_basis(self, weight: int) -> Tuple[List[Slot], List[List[RatFunc]]]:
        """Slots of the weight and the matrix whose columns are the new basis vectors."""
        frame = self.frame
        slots = weight_slots(self.base, weight)
        columns = [frame.vector(s).vector(slots) for s in slots]
        return slots, [[columns[j][i] for j in range(len(slots))] for i in range(len(slots))]

    def e_prime(self, x: Element) -> Element:
        return self.frame.e_prime(x)

    @property
    def is_identity(self) -> bool:
        return self.frame.is_canonical

    def to_dict(self) -> Dict[str, Any]:
        return {
            "shape": str(self.base),
            "generators": [
                {"component": key[0], "tag": key[1], "image": image.to_records()}
                for key, image in self.images
            ],
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "TwistedPresentation":
        """Read the twist file layout.

        Raises:
            ShapeError: If the shape does not parse or a string is unknown.
        """
        shape = parse_shape(str(data["shape"]))
        images = {}
        strings = set(shape.strings())
        for entry in data.get("generators", []):
            key = (int(entry["component"]), str(entry["tag"]))
            if key not in strings:
                raise ShapeError(f"{shape} has no string {key}")
            images[key] = Element.from_records(entry["image"])
        return cls.from_mapping(shape, images)

    def __str__(self) -> str:
        if not self.images:
            return f"{self.base} (untwisted)"
        moved = ", ".join(f"{k[1]}{k[0]} -> {v}" for k, v in self.images)
        return f"{self.base} with {moved}"


def default_window(shape: ModuleShape) -> int:
    """Enough of every string to see each block's top and bottom heads."""
    largest = max([0] + [abs(c.block) for c in shape.components])
    return 2 * largest + 4


# ----------------------------------------------------------------------
# Linear algebra on element spans
# ----------------------------------------------------------------------


def _columns(vectors: Sequence[Element]) -> Tuple[List[Slot], List[List[RatFunc]]]:
    slots = sorted({s for v in vectors for s in v.slots()})
    rows = [[v.coeff(s) for v in vectors] for s in slots]
    return slots, rows


def combination(vectors: Sequence[Element], coeffs: Sequence[RatFunc]) -> Element:
    result = Element.zero()
    for v, c in zip(vectors, coeffs):
        if c:
            result = result + v.scale(c)
    return result


def kernel_combinations(
    vectors: Sequence[Element], constraints: Sequence[Element]
) -> List[Element]:
    """A basis of {sum c_i vectors[i] : sum c_i constraints[i] = 0}."""
    if not vectors:
        return []
    _, rows = _columns(constraints)
    return [combination(vectors, c) for c in nullspace(rows, len(vectors))]


def span_rank(vectors: Sequence[Element]) -> int:
    if not vectors:
        return 0
    _, rows = _columns(vectors)
    return rank(rows)


def intersect_spans(first: Sequence[Element], second: Sequence[Element]) -> List[Element]:
    """A basis of span(first) n span(second)."""
    if not first or not second:
        return []
    constraints = list(first) + [-v for v in second]
    _, rows = _columns(constraints)
    result = []
    for c in nullspace(rows, len(constraints)):
        x = combination(first, c[: len(first)])
        if x:
            result.append(x)
    return result


def off_block(x: Element, shape: ModuleShape, n: int) -> Element:
    """The part of x on summands outside the Casimir block c_n."""
    return Element.from_dict({s: c for s, c in x.terms if shape[s.component].block != n})


# ----------------------------------------------------------------------
# Validity
# ----------------------------------------------------------------------


def _invertible(presentation: TwistedPresentation, window: int) -> Optional[str]:
    frame = presentation.frame
    for w in covered_weights(presentation.base, window):
        if not frame.spans(w):
            return f"new basis vectors do not span weight {w}"
    return None


def _f_compatible(presentation: TwistedPresentation, window: int) -> Optional[str]:
    frame = presentation.frame
    shape = presentation.base
    for key, image in frame.images:
        top = shape[key[0]].max_k(key[1])
        last = window if top is None else min(top, window)
        for k in range(last):
            x = frame.vector(Slot(key[0], key[1], k))
            expected = frame.vector(Slot(key[0], key[1], k + 1)).scale(q_int(k + 1))
            if act(AlgebraGen.F, x, shape) != expected:
                return f"f does not act as in U_q on f^({k}) of {key}"
    return None


def _kernel_split(presentation: TwistedPresentation, window: int) -> Optional[str]:
    """Ker e_w = (Ker e_w n fM) + (Ker e_w n Ker e') at every head weight."""
    frame = presentation.frame
    shape = presentation.base
    heads = sorted({frame.head_weight(key) for key in shape.strings()}, reverse=True)
    covered = set(covered_weights(shape, window))
    for w in heads:
        if w not in covered:
            continue
        kernel = ker_e(shape, w)
        if not kernel:
            continue
        f_part = [Element.basis(s) for s in weight_slots(shape, w) if s.k >= 1]
        in_f = intersect_spans(kernel, f_part)
        in_ker_e_prime = intersect_spans(kernel, frame.ker_e_prime(w))
        if span_rank(in_f + in_ker_e_prime) != len(kernel):
            return f"Ker e at weight {w} has vectors outside fM not killed by e'"
    return None


def good_t_blocks(presentation: TwistedPresentation) -> List[int]:
    """T components whose new generators span a standard U_q-copy of T(n)."""
    frame = presentation.frame
    shape = presentation.base
    images = frame.image_map
    good = []
    for i, comp in enumerate(shape.components):
        if comp.kind != TMOD:
            continue
        v, z = images[(i, "v")], images[(i, "z")]
        if act(AlgebraGen.E, v, shape):
            continue
        ez = act(AlgebraGen.E, z, shape)
        target = divided_power(comp.parameter, v, shape)
        if ez and span_rank([ez, target]) == 1:
            good.append(i)
    return good


def _t_condition(presentation: TwistedPresentation) -> Optional[str]:
    """e of the c_n block at weight -n-2 lies in the span of e z~ over standard T(n) copies."""
    frame = presentation.frame
    shape = presentation.base
    good = good_t_blocks(presentation)
    images = frame.image_map
    blocks = sorted({c.block for c in shape.components if c.block >= 0})
    for n in blocks:
        w = -n - 2
        block_vectors = [
            Element.basis(s) for s in weight_slots(shape, w) if shape[s.component].block == n
        ]
        e_images = [act(AlgebraGen.E, x, shape) for x in block_vectors]
        e_images = [y for y in e_images if y]
        if not e_images:
            continue
        reachable = [
            act(AlgebraGen.E, images[(i, "z")], shape)
            for i in good
            if shape[i].parameter == n
        ]
        if span_rank(reachable + e_images) != span_rank(reachable):
            return f"no standard T({n}) copy matches e on weight {w}"
    return None


def validate_twist(
    presentation: TwistedPresentation, window: Optional[int] = None
) -> VerificationReport:
    """Invertibility and the compatibility conditions (a)-(c), within a window."""
    if window is None:
        window = default_window(presentation.base)
    report = VerificationReport(f"twisted presentation {presentation}")
    try:
        presentation.frame
    except TwistError as e:
        report.add("invertible", False, detail=str(e))
        return report
    for name, check in (
        ("invertible", lambda: _invertible(presentation, window)),
        ("f_compatible", lambda: _f_compatible(presentation, window)),
        ("kernel_split", lambda: _kernel_split(presentation, window)),
        ("t_generators", lambda: _t_condition(presentation)),
    ):
        try:
            problem = check()
        except IsomorphismError as e:
            problem = str(e)
        report.add(name, problem is None, detail=problem or "")
        if problem is not None:
            break
    log.debug(f"Validated {presentation}: {report.passed}")
    return report


def check_twist(presentation: TwistedPresentation, window: Optional[int] = None) -> None:
    """Raise TwistError naming the first failing condition."""
    report = validate_twist(presentation, window)
    for c in report.conditions:
        if not c.passed:
            raise TwistError(c.name, c.detail)


# ----------------------------------------------------------------------
# Random twists
# ----------------------------------------------------------------------

_COEFF_CHOICES = (
    RatFunc.from_int(0),
    ONE,
    -ONE,
    RatFunc.from_int(2),
    Q,
    ONE + Q,
    Q.inverse(),
)


def _pick(rng: np.random.Generator, nonzero: bool = False) -> RatFunc:
    start = 1 if nonzero else 0
    return _COEFF_CHOICES[int(rng.integers(start, len(_COEFF_CHOICES)))]


def _full_rank(rows: List[List[RatFunc]]) -> bool:
    return not rows or rank(rows) == len(rows)


def _random_images(rng: np.random.Generator, shape: ModuleShape) -> Dict[StringKey, Element]:
    images: Dict[StringKey, Element] = {}
    blocks = sorted({c.block for c in shape.components if c.block >= 0})
    for n in blocks:
        top_verma = [
            i for i, c in enumerate(shape.components) if c.kind == VERMA and c.parameter == n
        ]
        bottom_verma = [
            i for i, c in enumerate(shape.components) if c.kind == VERMA and c.parameter == -n - 2
        ]
        tees = [i for i, c in enumerate(shape.components) if c.kind == TMOD and c.parameter == n]
        top_heads = [Element.of(i, "m") for i in top_verma] + [Element.of(i, "v") for i in tees]
        bottom_heads = [Element.of(i, "z") for i in tees]
        bottom_heads += [Element.of(i, "m") for i in bottom_verma]
        admixtures = [divided_power(n + 1, h, shape) for h in top_heads]

        # Verma tops mix with every top head; T tops are only rescaled.
        top_rows = []
        for row, i in enumerate(top_verma):
            coeffs = [_pick(rng) for _ in top_heads]
            coeffs[row] = _pick(rng, nonzero=True)
            top_rows.append(coeffs)
        for j, i in enumerate(tees):
            coeffs = [RatFunc.from_int(0)] * len(top_heads)
            coeffs[len(top_verma) + j] = _pick(rng, nonzero=True)
            top_rows.append(coeffs)
        # z images keep their own z only; Verma bottoms mix with everything.
        bottom_rows = []
        for j, i in enumerate(tees):
            coeffs = [RatFunc.from_int(0)] * len(bottom_heads)
            coeffs[j] = _pick(rng, nonzero=True)
            for b in range(len(tees), len(bottom_heads)):
                coeffs[b] = _pick(rng)
            bottom_rows.append(coeffs)
        for row, i in enumerate(bottom_verma):
            coeffs = [_pick(rng) for _ in bottom_heads]
            coeffs[len(tees) + row] = _pick(rng, nonzero=True)
            bottom_rows.append(coeffs)
        if not (_full_rank(top_rows) and _full_rank(bottom_rows)):
            raise TwistError("invertible", f"singular mixing in block {n}")

        top_keys = [(i, "m") for i in top_verma] + [(i, "v") for i in tees]
        bottom_keys = [(i, "z") for i in tees] + [(i, "m") for i in bottom_verma]
        for key, coeffs in zip(top_keys, top_rows):
            images[key] = combination(top_heads, coeffs)
        for key, coeffs in zip(bottom_keys, bottom_rows):
            extra = combination(admixtures, [_pick(rng) for _ in admixtures])
            images[key] = combination(bottom_heads, coeffs) + extra
    return images


def random_twist(
    rng: np.random.Generator, shape: Optional[ModuleShape] = None, max_tries: int = 50
) -> TwistedPresentation:
    """A random valid finite-support twist, by default of M(1)+T(1)+M(-3).

    Generators are mixed inside each Casimir block and f^(n+1) multiples of
    the top heads are added to the bottom generators. Draws failing the
    checks are resampled.

    Raises:
        RuntimeError: If no valid twist is found in max_tries draws.
    """
    if shape is None:
        shape = parse_shape("M(1)+T(1)+M(-3)")
    for attempt in range(max_tries):
        try:
            presentation = TwistedPresentation.from_mapping(shape, _random_images(rng, shape))
            check_twist(presentation)
        except TwistError as e:
            log.warning(f"Random twist rejected ({e.condition}), resampling")
            continue
        log.debug(f"Random twist of {shape} accepted after {attempt + 1} draws")
        return presentation
    raise RuntimeError(f"No valid twist of {shape} in {max_tries} draws")
