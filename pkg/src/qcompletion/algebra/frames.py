"""B_q-structures given by generator images.

A frame assigns to every string (component, tag) of a shape a weight
vector, its generator image. The frame basis is f^(k) applied to the
images, and the frame's e', e~, f~ are the canonical string formulas read
in frame coordinates. The canonical frame (images = canonical
generators) reproduces ``act(E_PRIME)`` and ``kashiwara`` exactly.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from qcompletion.algebra.actions import Kashiwara, divided_power
from qcompletion.algebra.linalg import solve
from qcompletion.algebra.modules import Element, ModuleShape, Slot, weight_slots
from qcompletion.algebra.qarith import RatFunc
from qcompletion.core.errors import IsomorphismError, ShapeError, WeightError

log = logging.getLogger(__name__)
log.addHandler(logging.NullHandler())

StringKey = Tuple[int, str]


@dataclass(frozen=True)
class BqFrame:
    """Generator images defining a B_q-structure on a shape.

    Attributes:
        shape: The module shape whose vectors are expressed in canonical slots.
        images: (string key, generator image) pairs, one per string of the shape.
    """

    shape: ModuleShape
    images: Tuple[Tuple[StringKey, Element], ...]

    def __post_init__(self) -> None:
        keys = [key for key, _ in self.images]
        if sorted(keys) != sorted(self.shape.strings()):
            raise ShapeError(f"Frame keys {keys} do not match the strings of {self.shape}")
        for key, image in self.images:
            if image.weight(self.shape) != self.head_weight(key):
                raise WeightError(
                    f"Image of {key} must be a nonzero vector of weight {self.head_weight(key)}"
                )

    @classmethod
    def canonical(cls, shape: ModuleShape) -> "BqFrame":
        return cls(shape, tuple((key, Element.of(key[0], key[1])) for key in shape.strings()))

    @classmethod
    def from_mapping(cls, shape: ModuleShape, images: Mapping[StringKey, Element]) -> "BqFrame":
        full = {key: Element.of(key[0], key[1]) for key in shape.strings()}
        full.update(images)
        return cls(shape, tuple((key, full[key]) for key in shape.strings()))

    @property
    def image_map(self) -> Dict[StringKey, Element]:
        return dict(self.images)

    @property
    def is_canonical(self) -> bool:
        return all(image == Element.of(key[0], key[1]) for key, image in self.images)

    def head_weight(self, key: StringKey) -> int:
        return self.shape[key[0]].head_weight(key[1])

    def vector(self, slot: Slot) -> Element:
        """The frame basis vector f^(k) applied to the image of slot's string."""
        return divided_power(slot.k, self.image_map[slot.string], self.shape)

    def frame_slots(self, weight: int) -> List[Slot]:
        """Frame slots of the given weight; they match the canonical ones by string."""
        return weight_slots(self.shape, weight)

    # ------------------------------------------------------------------
    # Coordinates
    # ------------------------------------------------------------------

    def to_frame(self, x: Element) -> Element:
        """Coordinates of x in the frame basis, as an Element over frame slots.

        Raises:
            IsomorphismError: If the frame vectors do not form a basis of a
                weight space met by x.
        """
        if self.is_canonical:
            return x
        out: Dict[Slot, RatFunc] = {}
        by_weight: Dict[int, Dict[Slot, RatFunc]] = {}
        for slot, c in x.terms:
            by_weight.setdefault(self.shape.slot_weight(slot), {})[slot] = c
        for w, coeffs in by_weight.items():
            slots, inverse = _frame_inverse(self, w)
            vec = Element.from_dict(coeffs).vector(slots)
            for i, row in enumerate(inverse):
                value = RatFunc.from_int(0)
                for a, b in zip(row, vec):
                    if a and b:
                        value = value + a * b
                if value:
                    out[slots[i]] = value
        return Element.from_dict(out)

    def from_frame(self, y: Element) -> Element:
        """The vector with frame coordinates y."""
        if self.is_canonical:
            return y
        result = Element.zero()
        for slot, c in y.terms:
            result = result + self.vector(slot).scale(c)
        return result

    # ------------------------------------------------------------------
    # B_q operators
    # ------------------------------------------------------------------

    def e_prime(self, x: Element) -> Element:
        if self.shape.has_findim:
            raise ShapeError(f"e' is not defined on {self.shape}")
        y = self.to_frame(x)
        out = {
            slot.shifted(-1): c * RatFunc.q_power(-(slot.k - 1)) for slot, c in y.terms if slot.k
        }
        return self.from_frame(Element.from_dict(out))

    def kashiwara(self, direction: Kashiwara, x: Element) -> Element:
        y = self.to_frame(x)
        out: Dict[Slot, RatFunc] = {}
        for slot, c in y.terms:
            if direction is Kashiwara.E_TILDE:
                if slot.k:
                    out[slot.shifted(-1)] = c
            else:
                top = self.shape[slot.component].max_k(slot.tag)
                if top is None or slot.k < top:
                    out[slot.shifted(1)] = c
        return self.from_frame(Element.from_dict(out))

    def b_decompose(self, x: Element) -> List[Tuple[int, Element]]:
        """x = sum_k f^(k) u_k with u_k in the span of the images, highest k first."""
        y = self.to_frame(x)
        images = self.image_map
        parts: Dict[int, Element] = {}
        for slot, c in y.terms:
            parts[slot.k] = parts.get(slot.k, Element.zero()) + images[slot.string].scale(c)
        return [(k, parts[k]) for k in sorted(parts, reverse=True)]

    def ker_e_prime(self, weight: int) -> List[Element]:
        """Generator images of the given weight: a basis of Ker e' there."""
        return [image for key, image in self.images if self.head_weight(key) == weight]

    def spans(self, weight: int) -> bool:
        """Whether the frame vectors form a basis of the weight space."""
        try:
            _frame_inverse(self, weight)
        except IsomorphismError:
            return False
        return True


@lru_cache(maxsize=4096)
def _frame_inverse(
    frame: BqFrame, weight: int
) -> Tuple[Tuple[Slot, ...], Tuple[Tuple[RatFunc, ...], ...]]:
    """Slots of the weight and the matrix taking canonical to frame coordinates.

    Cached, so the result is immutable.
    """
    slots = weight_slots(frame.shape, weight)
    columns = [frame.vector(s).vector(slots) for s in slots]
    n = len(slots)
    rows = [[columns[j][i] for j in range(n)] for i in range(n)]
    inverse_columns: List[Optional[Sequence[RatFunc]]] = []
    for i in range(n):
        unit = [RatFunc.from_int(1 if r == i else 0) for r in range(n)]
        sol = solve(rows, unit)
        if sol is None:
            raise IsomorphismError(f"Frame vectors do not span weight {weight} of {frame.shape}")
        inverse_columns.append(sol)
    inverse = tuple(tuple(inverse_columns[j][i] for j in range(n)) for i in range(n))
    log.debug(f"Frame inverse computed at weight {weight} ({n} slots)")
    return tuple(slots), inverse
