"""Formal fractions f^-r m and membership in the completion.

A symbol f^-r m stands for the class of (r, m) under
f^-r m ~ f^-k m'  iff  f^k m = f^r m'. Its minimal expression has r = 0 or
m outside f M. On M(-n-2), the completion C(M) is spanned by the symbols
f^(k) m0 with k >= -n-1.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Dict, Optional

from qcompletion.algebra.actions import act_power
from qcompletion.algebra.modules import AlgebraGen, Element, ModuleShape, Slot
from qcompletion.algebra.qarith import RatFunc, q_factorial, q_int
from qcompletion.core.errors import ShapeError, WeightError

log = logging.getLogger(__name__)
log.addHandler(logging.NullHandler())


@dataclass(frozen=True)
class DeodharSymbol:
    """The formal symbol f^-r m.

    Attributes:
        r: Formal exponent of f^-1.
        m: Element of a torsion-free shape.
    """

    r: int
    m: Element

    def __post_init__(self) -> None:
        if self.r < 0:
            raise ValueError(f"Deodhar exponent must be >= 0, got {self.r}")

    def weight(self, shape: ModuleShape) -> int:
        """Weight of the symbol.

        Raises:
            WeightError: If m is not a weight vector.
        """
        w = self.m.weight(shape)
        if w is None:
            raise WeightError(f"{self.m} is not a weight vector")
        return w + 2 * self.r

    def __str__(self) -> str:
        return f"f^-{self.r}·({self.m})"


def _check_torsion_free(shape: ModuleShape) -> None:
    if shape.has_findim:
        raise ShapeError(f"Deodhar symbols need a torsion-free shape, got {shape}")


def deodhar_normalize(symbol: DeodharSymbol, shape: ModuleShape) -> DeodharSymbol:
    """The minimal expression: cancel f while every slot of m lies in f M."""
    _check_torsion_free(shape)
    r, m = symbol.r, symbol.m
    while r > 0 and m and all(s.k >= 1 for s in m.slots()):
        # f^(k) = f f^(k-1) / [k]
        m = Element.from_dict({s.shifted(-1): c / q_int(s.k) for s, c in m.terms})
        r -= 1
    return DeodharSymbol(r, m)


def _search_bound(m: Element, shape: ModuleShape) -> int:
    top_k = max((s.k for s in m.slots()), default=0)
    largest = max((abs(c.parameter) for c in shape.components), default=0)
    return top_k + 2 * largest + 4


def in_completion(symbol: DeodharSymbol, shape: ModuleShape) -> bool:
    """Whether f^-r m lies in C(M).

    With a the weight of the minimal symbol, the criterion is
    j = r - a > 0 together with e^p f^(p-j) m = 0 for some p >= j.

    Raises:
        WeightError: If m is not a weight vector.
    """
    _check_torsion_free(shape)
    s = deodhar_normalize(symbol, shape)
    if s.r == 0 or not s.m:
        return True
    a = s.weight(shape)
    j = s.r - a
    if j <= 0:
        return False
    bound = _search_bound(s.m, shape)
    for p in range(j, j + bound + 1):
        x = act_power(AlgebraGen.F, p - j, s.m, shape)
        if not act_power(AlgebraGen.E, p, x, shape):
            log.debug(f"{s} in C(M): e^{p} f^{p - j} m = 0")
            return True
    return False


def deodhar_coefficient(n: int, k: int) -> RatFunc:
    """c with f^(k) m0 = c f^(k+n+1) m~ in C(M(-n-2)) = M(n), for k >= -n-1.

    c = [k+n+1]! / ([k]! [n+1]!), negative factorials by [-k]! = (-1)^k [k]!.
    """
    if k < -n - 1:
        raise ValueError(f"f^({k}) m0 lies outside the completion of M({-n - 2})")
    return q_factorial(k + n + 1) / (q_factorial(k) * q_factorial(n + 1))


def completion_coordinates(symbol: DeodharSymbol, n: int) -> Optional[Element]:
    """f^-r m for m in M(-n-2) written in the slots of M(n) = C(M), or None outside C(M).

    Uses f^-r f^(j) m~ = ([j-r]! / [j]!) f^(j-r) m~.
    """
    out: Dict[Slot, RatFunc] = {}
    for slot, c in symbol.m.terms:
        j = slot.k + n + 1
        i = j - symbol.r
        if i < 0:
            return None
        coeff = c * deodhar_coefficient(n, slot.k) * q_factorial(i) / q_factorial(j)
        out[Slot(slot.component, slot.tag, i)] = coeff
    return Element.from_dict(out)

