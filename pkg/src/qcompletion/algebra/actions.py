"""Actions of e, f, t, t^-1 and e' on canonical module shapes.

The rules are closed forms on divided-power slots, extended linearly:

- t f^(k)g = q^wt f^(k)g
- f f^(k)g = [k+1] f^(k+1)g, zero past the top of a V(n) string
- e f^(k)g = f^(k)(e g) + [h-k+1] f^(k-1)g, h the weight of g;
  e kills m, v and u, and e z = f^(n) v in T(n)
- e' f^(k)g = q^-(k-1) f^(k-1)g; e' is not defined on V(n)
"""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from qcompletion.algebra.linalg import nullspace
from qcompletion.algebra.modules import (
    VERMA,
    AlgebraGen,
    ComponentShape,
    Element,
    ModuleShape,
    Slot,
    weight_slots,
)
from qcompletion.algebra.qarith import ONE, Q, RatFunc, q_binomial, q_int
from qcompletion.core.errors import ShapeError

log = logging.getLogger(__name__)
log.addHandler(logging.NullHandler())

_Q_MINUS_INV = Q - Q.inverse()


class Kashiwara(enum.Enum):
    """Kashiwara operators."""

    E_TILDE = "e_tilde"
    F_TILDE = "f_tilde"


def _accumulate(out: Dict[Slot, RatFunc], slot: Slot, c: RatFunc) -> None:
    if slot in out:
        out[slot] = out[slot] + c
    else:
        out[slot] = c


def act(g: AlgebraGen, x: Element, shape: ModuleShape) -> Element:
    """Apply one generator to an element.

    Raises:
        ShapeError: If a slot of x is outside the shape, or e' meets a V(n) summand.
    """
    out: Dict[Slot, RatFunc] = {}
    for slot, c in x.terms:
        shape.check_slot(slot)
        comp = shape[slot.component]
        k = slot.k
        if g is AlgebraGen.T or g is AlgebraGen.T_INV:
            w = shape.slot_weight(slot)
            _accumulate(out, slot, c * RatFunc.q_power(w if g is AlgebraGen.T else -w))
        elif g is AlgebraGen.F:
            top = comp.max_k(slot.tag)
            if top is None or k < top:
                _accumulate(out, slot.shifted(1), c * q_int(k + 1))
        elif g is AlgebraGen.E:
            if slot.tag == "z":
                n = comp.parameter
                _accumulate(out, Slot(slot.component, "v", n + k), c * q_binomial(n + k, k))
            if k >= 1:
                h = comp.head_weight(slot.tag)
                coeff = q_int(h - k + 1)
                if coeff:
                    _accumulate(out, slot.shifted(-1), c * coeff)
        elif g is AlgebraGen.E_PRIME:
            if comp.is_findim:
                raise ShapeError(f"e' is not defined on the finite-dimensional summand {comp}")
            if k >= 1:
                _accumulate(out, slot.shifted(-1), c * RatFunc.q_power(-(k - 1)))
        else:
            raise ValueError(f"Unknown generator {g!r}")
    return Element.from_dict(out)


def act_power(g: AlgebraGen, p: int, x: Element, shape: ModuleShape) -> Element:
    """Apply g p times."""
    for _ in range(p):
        if not x:
            break
        x = act(g, x, shape)
    return x


def divided_power(k: int, x: Element, shape: ModuleShape) -> Element:
    """Apply f^(k) = f^k / [k]!, using f^(k) f^(j) = binom(j+k, k) f^(j+k)."""
    if k < 0:
        raise ValueError(f"divided power needs k >= 0, got {k}")
    out: Dict[Slot, RatFunc] = {}
    for slot, c in x.terms:
        shape.check_slot(slot)
        top = shape[slot.component].max_k(slot.tag)
        if top is not None and slot.k + k > top:
            continue
        _accumulate(out, slot.shifted(k), c * q_binomial(slot.k + k, k))
    return Element.from_dict(out)


def act_casimir(x: Element, shape: ModuleShape) -> Element:
    """C = (q t + q^-1 t^-1) / (q - q^-1)^2 + f e."""
    t_part = act(AlgebraGen.T, x, shape).scale(Q) + act(AlgebraGen.T_INV, x, shape).scale(
        Q.inverse()
    )
    fe = act(AlgebraGen.F, act(AlgebraGen.E, x, shape), shape)
    return t_part.scale(ONE / (_Q_MINUS_INV * _Q_MINUS_INV)) + fe


def act_delta(x: Element, shape: ModuleShape) -> Element:
    """Delta = q t + q^-1 t^-1 + (q - q^-1)^2 f e - 2."""
    t_part = act(AlgebraGen.T, x, shape).scale(Q) + act(AlgebraGen.T_INV, x, shape).scale(
        Q.inverse()
    )
    fe = act(AlgebraGen.F, act(AlgebraGen.E, x, shape), shape)
    return t_part + fe.scale(_Q_MINUS_INV * _Q_MINUS_INV) - x.scale(2)


def casimir_value(n: int) -> RatFunc:
    """c_n = (q^(n+1) + q^-(n+1)) / (q - q^-1)^2."""
    return (RatFunc.q_power(n + 1) + RatFunc.q_power(-n - 1)) / (_Q_MINUS_INV * _Q_MINUS_INV)


def _require_bq(shape: ModuleShape) -> None:
    if shape.has_findim:
        raise ShapeError(f"{shape} has a finite-dimensional summand without B_q-structure")


def b_decompose(x: Element, shape: ModuleShape) -> List[Tuple[int, Element]]:
    """Split x = sum_k f^(k) u_k with e' u_k = 0, highest k first."""
    _require_bq(shape)
    parts: Dict[int, Dict[Slot, RatFunc]] = {}
    for slot, c in x.terms:
        shape.check_slot(slot)
        parts.setdefault(slot.k, {})[Slot(slot.component, slot.tag, 0)] = c
    return [(k, Element.from_dict(parts[k])) for k in sorted(parts, reverse=True)]


def kashiwara(direction: Kashiwara, x: Element, shape: ModuleShape) -> Element:
    """Kashiwara operators by shifting along strings.

    On B_q summands the strings are those of M = sum f^(k) Ker e'; on V(n)
    they are the sl2 strings, with f~ f^(n) u = 0.
    """
    out: Dict[Slot, RatFunc] = {}
    for slot, c in x.terms:
        shape.check_slot(slot)
        if direction is Kashiwara.E_TILDE:
            if slot.k >= 1:
                out[slot.shifted(-1)] = c
        else:
            top = shape[slot.component].max_k(slot.tag)
            if top is None or slot.k < top:
                out[slot.shifted(1)] = c
    return Element.from_dict(out)


def _kernel(g: AlgebraGen, shape: ModuleShape, weight: int) -> List[Element]:
    slots = weight_slots(shape, weight)
    if not slots:
        return []
    target = weight_slots(shape, weight + 2)
    images = [act(g, Element.basis(s), shape).vector(target) for s in slots]
    rows = [[images[j][i] for j in range(len(slots))] for i in range(len(target))]
    return [Element.from_vector(slots, v) for v in nullspace(rows, len(slots))]


def ker_e(shape: ModuleShape, weight: int) -> List[Element]:
    """A basis of Ker e in the given weight space."""
    return _kernel(AlgebraGen.E, shape, weight)


def ker_e_prime(shape: ModuleShape, weight: int) -> List[Element]:
    """A basis of Ker e' in the given weight space."""
    _require_bq(shape)
    return _kernel(AlgebraGen.E_PRIME, shape, weight)


# ----------------------------------------------------------------------
# Completion of module shapes
# ----------------------------------------------------------------------


def is_complete_module(shape: ModuleShape) -> bool:
    """True iff every summand is T(n) or M(r) with r >= -1."""
    return all(c.is_complete() for c in shape.components)


@dataclass(frozen=True)
class Embedding:
    """The inclusion M -> C(M).

    Component i of a Verma summand M(-n-2) goes to the Verma summand M(n)
    of C(M) by f^(k) m -> binom(n+1+k, k) f^(n+1+k) m~, so that
    f^(n+1) m~ = m. Other summands map identically.

    Attributes:
        source: The shape M.
        target: The shape C(M).
        shifts: Component index -> n+1 for every completed summand.
    """

    source: ModuleShape
    target: ModuleShape
    shifts: Tuple[Tuple[int, int], ...] = field(default_factory=tuple)

    def shift(self, component: int) -> int:
        return dict(self.shifts).get(component, 0)

    def __call__(self, x: Element) -> Element:
        out: Dict[Slot, RatFunc] = {}
        for slot, c in x.terms:
            self.source.check_slot(slot)
            s = self.shift(slot.component)
            if s:
                out[slot.shifted(s)] = c * q_binomial(s + slot.k, slot.k)
            else:
                out[slot] = c
        return Element.from_dict(out)

    def pullback(self, y: Element) -> Optional[Element]:
        """The preimage of y, or None if y is not in the image of M."""
        out: Dict[Slot, RatFunc] = {}
        for slot, c in y.terms:
            s = self.shift(slot.component)
            if slot.k < s:
                return None
            k = slot.k - s
            out[Slot(slot.component, slot.tag, k)] = c / q_binomial(s + k, k)
        return Element.from_dict(out)

    def quotient_shape(self) -> ModuleShape:
        """C(M)/M as a sum of V(n), one per completed summand."""
        return ModuleShape(
            tuple(ComponentShape.findim(s - 1) for _, s in self.shifts)
        )

    def project(self, y: Element) -> Element:
        """Image of y in C(M)/M."""
        index = {comp: j for j, (comp, _) in enumerate(self.shifts)}
        out: Dict[Slot, RatFunc] = {}
        for slot, c in y.terms:
            j = index.get(slot.component)
            if j is not None and slot.k < self.shift(slot.component):
                out[Slot(j, "u", slot.k)] = c
        return Element.from_dict(out)

    def lift(self, u: Element) -> Element:
        """The section C(M)/M -> C(M) sending f^(k)u to f^(k) m~."""
        components = [comp for comp, _ in self.shifts]
        return Element.from_dict(
            {Slot(components[slot.component], "m", slot.k): c for slot, c in u.terms}
        )


def completion_module(shape: ModuleShape) -> Tuple[ModuleShape, Embedding]:
    """C(M): each M(-n-2), n >= 0, is replaced by M(n)."""
    components = []
    shifts = []
    for i, comp in enumerate(shape.components):
        if comp.kind == VERMA and comp.parameter <= -2:
            n = -comp.parameter - 2
            components.append(ComponentShape.verma(n))
            shifts.append((i, n + 1))
        else:
            components.append(comp)
    target = ModuleShape(tuple(components))
    log.debug(f"Completion of {shape} is {target}")
    return target, Embedding(shape, target, tuple(shifts))
