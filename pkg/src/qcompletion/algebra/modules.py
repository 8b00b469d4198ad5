"""Module shapes, divided-power slots and sparse elements.

A module shape is a finite direct sum of canonical indecomposables:

- ``M(r)``: the Verma module of highest weight r, one string f^(k) m;
- ``T(n)``: the extension of M(-n-2) by M(n), strings f^(k) v and f^(k) z;
- ``V(n)``: the (n+1)-dimensional simple module, one string f^(k) u, k <= n.

Elements are sparse Q(q)-combinations of slots (component, tag, k),
where slot (i, g, k) stands for f^(k) applied to generator g of
component i.
"""

from __future__ import annotations

import enum
import logging
import re
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

from qcompletion.algebra.qarith import ONE, RatFunc
from qcompletion.core.errors import ShapeError

log = logging.getLogger(__name__)
log.addHandler(logging.NullHandler())

VERMA = "M"
TMOD = "T"
FINDIM = "V"

_TAGS = {VERMA: ("m",), TMOD: ("v", "z"), FINDIM: ("u",)}
_KIND_NAMES = {VERMA: "Verma", TMOD: "T", FINDIM: "FinDim"}


class AlgebraGen(enum.Enum):
    """Generators acting on modules: U_q generators and the Kashiwara e'."""

    E = "e"
    F = "f"
    T = "t"
    T_INV = "t_inv"
    E_PRIME = "e_prime"


@dataclass(frozen=True)
class ComponentShape:
    """One indecomposable summand.

    Attributes:
        kind: "M" (Verma), "T" or "V" (finite-dimensional).
        parameter: r for M(r), n for T(n) and V(n).
    """

    kind: str
    parameter: int

    def __post_init__(self) -> None:
        if self.kind not in _TAGS:
            raise ShapeError(f"Unknown component kind: {self.kind!r}")
        if self.kind in (TMOD, FINDIM) and self.parameter < 0:
            raise ShapeError(f"{self.kind}({self.parameter}) needs a nonnegative parameter")

    @classmethod
    def verma(cls, r: int) -> "ComponentShape":
        return cls(VERMA, r)

    @classmethod
    def tmod(cls, n: int) -> "ComponentShape":
        return cls(TMOD, n)

    @classmethod
    def findim(cls, n: int) -> "ComponentShape":
        return cls(FINDIM, n)

    @property
    def tags(self) -> Tuple[str, ...]:
        return _TAGS[self.kind]

    @property
    def is_findim(self) -> bool:
        return self.kind == FINDIM

    def head_weight(self, tag: str) -> int:
        """Weight of the generator with the given tag."""
        self._check_tag(tag)
        if tag == "z":
            return -self.parameter - 2
        return self.parameter

    def max_k(self, tag: str) -> Optional[int]:
        """Last divided power on the string, None for infinite strings."""
        self._check_tag(tag)
        return self.parameter if self.kind == FINDIM else None

    def is_complete(self) -> bool:
        """Whether f^(n+1): M_n^e -> M_{-n-2}^e is bijective on this summand."""
        if self.kind == TMOD:
            return True
        if self.kind == VERMA:
            return self.parameter >= -1
        return False

    @property
    def block(self) -> int:
        """The n of the Casimir eigenvalue c_n this summand lives in."""
        if self.kind == VERMA:
            return max(self.parameter, -self.parameter - 2)
        return self.parameter

    def _check_tag(self, tag: str) -> None:
        if tag not in self.tags:
            raise ShapeError(f"Tag {tag!r} does not belong to {self}")

    def to_record(self) -> Dict[str, Any]:
        return {"kind": _KIND_NAMES[self.kind], "parameter": self.parameter}

    @classmethod
    def from_record(cls, record: Mapping[str, Any]) -> "ComponentShape":
        names = {v: k for k, v in _KIND_NAMES.items()}
        kind = record.get("kind")
        if kind not in names:
            raise ShapeError(f"Unknown component kind: {kind!r}")
        return cls(names[kind], int(record["parameter"]))

    def __str__(self) -> str:
        return f"{self.kind}({self.parameter})"


@dataclass(frozen=True)
class ModuleShape:
    """A finite direct sum of indecomposables, in order."""

    components: Tuple[ComponentShape, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "components", tuple(self.components))

    def __iter__(self) -> Iterator[ComponentShape]:
        return iter(self.components)

    def __len__(self) -> int:
        return len(self.components)

    def __getitem__(self, index: int) -> ComponentShape:
        return self.components[index]

    def __add__(self, other: "ModuleShape") -> "ModuleShape":
        return ModuleShape(self.components + other.components)

    @property
    def has_findim(self) -> bool:
        return any(c.is_findim for c in self.components)

    @property
    def all_findim(self) -> bool:
        return bool(self.components) and all(c.is_findim for c in self.components)

    def strings(self) -> List[Tuple[int, str]]:
        """(component, tag) for every string, in slot order."""
        return [(i, tag) for i, comp in enumerate(self.components) for tag in comp.tags]

    def check_slot(self, slot: "Slot") -> None:
        if not 0 <= slot.component < len(self.components):
            raise ShapeError(f"Slot {slot} is outside {self}")
        comp = self.components[slot.component]
        if slot.tag not in comp.tags:
            raise ShapeError(f"Slot {slot} has a tag foreign to {comp}")
        top = comp.max_k(slot.tag)
        if slot.k < 0 or (top is not None and slot.k > top):
            raise ShapeError(f"Slot {slot} is outside {comp}")

    def slot_weight(self, slot: "Slot") -> int:
        return self.components[slot.component].head_weight(slot.tag) - 2 * slot.k

    def to_records(self) -> List[Dict[str, Any]]:
        return [c.to_record() for c in self.components]

    @classmethod
    def from_records(cls, records: Iterable[Mapping[str, Any]]) -> "ModuleShape":
        return cls(tuple(ComponentShape.from_record(r) for r in records))

    def __str__(self) -> str:
        return format_shape(self)


_COMPONENT_RE = re.compile(r"^\s*([MTV])\s*\(\s*(-?\d+)\s*\)\s*$")


def parse_shape(text: str) -> ModuleShape:
    """Parse ``M(r)``, ``T(n)`` and ``V(n)`` summands joined by ``+``.

    Raises:
        ShapeError: If the text does not follow the grammar.
    """
    if not text or not text.strip():
        raise ShapeError("Empty shape")
    components = []
    for part in text.split("+"):
        match = _COMPONENT_RE.match(part)
        if match is None:
            raise ShapeError(f"Cannot parse shape component {part.strip()!r} in {text!r}")
        components.append(ComponentShape(match.group(1), int(match.group(2))))
    return ModuleShape(tuple(components))


def format_shape(shape: ModuleShape) -> str:
    return "+".join(str(c) for c in shape.components) or "0"


@dataclass(frozen=True, order=True)
class Slot:
    """The basis vector f^(k) g of component ``component``.

    Attributes:
        component: Index of the summand.
        tag: Generator tag: m, v, z or u.
        k: Divided-power exponent.
    """

    component: int
    tag: str
    k: int

    def shifted(self, dk: int) -> "Slot":
        return Slot(self.component, self.tag, self.k + dk)

    @property
    def string(self) -> Tuple[int, str]:
        return (self.component, self.tag)

    def __str__(self) -> str:
        return f"f^({self.k}){self.tag}{self.component}"


def weight_slots(shape: ModuleShape, weight: int) -> List[Slot]:
    """All slots of the given weight, in slot order."""
    slots = []
    for i, tag in shape.strings():
        comp = shape[i]
        diff = comp.head_weight(tag) - weight
        if diff < 0 or diff % 2:
            continue
        k = diff // 2
        top = comp.max_k(tag)
        if top is None or k <= top:
            slots.append(Slot(i, tag, k))
    return slots


def covered_weights(shape: ModuleShape, window: int) -> List[int]:
    """Weights whose every slot has k <= window, highest first."""
    heads = [shape[i].head_weight(tag) for i, tag in shape.strings()]
    if not heads:
        return []
    low = min(heads) - 2 * window
    weights = []
    for w in range(max(heads), low - 1, -1):
        slots = weight_slots(shape, w)
        if slots and all(s.k <= window for s in slots):
            weights.append(w)
    return weights


@dataclass(frozen=True)
class Element:
    """A sparse Q(q)-combination of slots.

    Attributes:
        terms: (slot, coefficient) pairs sorted by slot, coefficients nonzero.
    """

    terms: Tuple[Tuple[Slot, RatFunc], ...] = field(default_factory=tuple)

    @classmethod
    def from_dict(cls, coeffs: Mapping[Slot, Any]) -> "Element":
        items = []
        for slot, c in coeffs.items():
            c = RatFunc.coerce(c)
            if c:
                items.append((slot, c))
        items.sort(key=lambda t: t[0])
        return cls(tuple(items))

    @classmethod
    def basis(cls, slot: Slot, coeff: Any = ONE) -> "Element":
        return cls.from_dict({slot: coeff})

    @classmethod
    def of(cls, component: int, tag: str, k: int = 0, coeff: Any = ONE) -> "Element":
        return cls.basis(Slot(component, tag, k), coeff)

    @classmethod
    def zero(cls) -> "Element":
        return cls(())

    def to_dict(self) -> Dict[Slot, RatFunc]:
        return dict(self.terms)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def slots(self) -> List[Slot]:
        return [s for s, _ in self.terms]

    def coeff(self, slot: Slot) -> RatFunc:
        for s, c in self.terms:
            if s == slot:
                return c
        return RatFunc.from_int(0)

    def __add__(self, other: "Element") -> "Element":
        if not isinstance(other, Element):
            return NotImplemented
        if not other.terms:
            return self
        if not self.terms:
            return other
        merged = dict(self.terms)
        for slot, c in other.terms:
            merged[slot] = merged[slot] + c if slot in merged else c
        return Element.from_dict(merged)

    def __neg__(self) -> "Element":
        return Element(tuple((s, -c) for s, c in self.terms))

    def __sub__(self, other: "Element") -> "Element":
        if not isinstance(other, Element):
            return NotImplemented
        return self + (-other)

    def scale(self, c: Any) -> "Element":
        c = RatFunc.coerce(c)
        if not c:
            return Element.zero()
        return Element(tuple((s, c * v) for s, v in self.terms))

    def __rmul__(self, c: Any) -> "Element":
        try:
            return self.scale(c)
        except TypeError:
            return NotImplemented

    def weights(self, shape: ModuleShape) -> List[int]:
        return sorted({shape.slot_weight(s) for s, _ in self.terms}, reverse=True)

    def weight(self, shape: ModuleShape) -> Optional[int]:
        """The common weight of all terms, None for zero or mixed elements."""
        ws = self.weights(shape)
        return ws[0] if len(ws) == 1 else None

    def min_valuation(self) -> int:
        return min(c.valuation() for _, c in self.terms)

    def vector(self, slots: Sequence[Slot]) -> List[RatFunc]:
        """Coordinates on the given slots."""
        coeffs = dict(self.terms)
        zero = RatFunc.from_int(0)
        return [coeffs.get(s, zero) for s in slots]

    @classmethod
    def from_vector(cls, slots: Sequence[Slot], values: Sequence[RatFunc]) -> "Element":
        return cls.from_dict(dict(zip(slots, values)))

    def to_records(self) -> List[List[Any]]:
        return [[s.component, s.tag, s.k, str(c)] for s, c in self.terms]

    @classmethod
    def from_records(cls, records: Iterable[Sequence[Any]]) -> "Element":
        coeffs: Dict[Slot, RatFunc] = {}
        for component, tag, k, c in records:
            slot = Slot(int(component), str(tag), int(k))
            value = c if isinstance(c, RatFunc) else RatFunc.parse(str(c))
            coeffs[slot] = coeffs[slot] + value if slot in coeffs else value
        return cls.from_dict(coeffs)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"({c})*{s}" for s, c in self.terms)
