"""Completed crystal lattices of M(-n-2) by two constructions.

All lattices here live in C(M(-n-2)) = M(n), in the slots f^(j) m~ of
M(n), where m~ is normalized by f^(n+1) m~ = m0. A symbol f^(k) m0,
k >= -n-1, sits in slot j = k+n+1 with the coefficient
``deodhar_coefficient(n, k)``.

The direct construction takes the A-span of
2 q^(n(i-n-1)) / (1 + q^-(i-n-1)) f^(i-n-1) m0, i >= 0. The second one
starts from the non-crystal lattice L# = sum_{k >= -n-1} A f^(k) m0 and
rescales it by q^-n(n+1) S_n (qt Delta)^(-n/2).
"""

from __future__ import annotations

import logging
from typing import Dict, List, Optional

from qcompletion.algebra.actions import completion_module
from qcompletion.algebra.modules import ComponentShape, Element, ModuleShape, Slot
from qcompletion.algebra.qarith import ONE, RatFunc, q_ratio_unit
from qcompletion.completion.deodhar import deodhar_coefficient
from qcompletion.core.config import LatticeConfig
from qcompletion.core.errors import NonStandardLatticeError
from qcompletion.crystal.basis import CrystalBasis, standard_lattice
from qcompletion.crystal.lattice import Lattice, TailLaw, lattice_equal

log = logging.getLogger(__name__)
log.addHandler(logging.NullHandler())


def _window(n: int, window: Optional[int]) -> int:
    return window if window is not None else LatticeConfig().window_for(n)


def completed_shape(n: int) -> ModuleShape:
    return ModuleShape((ComponentShape.verma(n),))


def _diagonal_lattice(n: int, coeffs: Dict[int, RatFunc], window: int) -> Lattice:
    """A-span of coeffs[j] f^(j) m~ on M(n), with the tail fitted at the window edge."""
    shape = completed_shape(n)
    gens = [Element.of(0, "m", j, c) for j, c in coeffs.items()]
    tail = TailLaw.fit(window - 1, coeffs[window - 1], window, coeffs[window])
    return Lattice.from_generators(shape, gens, window, {(0, "m"): tail})


def verma_generator_coeff(n: int, i: int) -> RatFunc:
    """2 q^(n(i-n-1)) / (1 + q^-(i-n-1)) times the slot coefficient of f^(i-n-1) m0."""
    d = i - n - 1
    scalar = RatFunc.from_int(2) * RatFunc.q_power(n * d) / (ONE + RatFunc.q_power(-d))
    return scalar * deodhar_coefficient(n, d)


def complete_verma_lattice(n: int, window: Optional[int] = None) -> Lattice:
    """The completed crystal lattice of M(-n-2), built from its generators."""
    if n < 0:
        raise ValueError(f"complete_verma_lattice needs n >= 0, got {n}")
    window = _window(n, window)
    coeffs = {i: verma_generator_coeff(n, i) for i in range(window + 1)}
    log.debug(f"Built completed Verma lattice for n={n}, window {window}")
    return _diagonal_lattice(n, coeffs, window)


def normalized_verma_lattice(n: int, window: Optional[int] = None) -> Lattice:
    """The same lattice from the unit-normalized generators.

    q^(n(i-n-1)) f^(i-n-1) m0 for i <= n and q^((n+1)(i-n-1)) f^(i-n-1) m0 for i > n.
    """
    window = _window(n, window)
    coeffs = {}
    for i in range(window + 1):
        d = i - n - 1
        exponent = n * d if i <= n else (n + 1) * d
        coeffs[i] = RatFunc.q_power(exponent) * deodhar_coefficient(n, d)
    return _diagonal_lattice(n, coeffs, window)


def sharp_lattice(n: int, window: Optional[int] = None) -> Lattice:
    """L# = sum_{k >= -n-1} A f^(k) m0; not stable under e~."""
    window = _window(n, window)
    coeffs = {j: deodhar_coefficient(n, j - n - 1) for j in range(window + 1)}
    return _diagonal_lattice(n, coeffs, window)


def half_inverse_factor(n: int, k: int) -> RatFunc:
    """(qt Delta)^(-1/2) on f^(k) m0: q^k (q^(-n-1) - 1)^-1."""
    return RatFunc.q_power(k) / (RatFunc.q_power(-n - 1) - ONE)


def half_factor(n: int, k: int) -> RatFunc:
    """(qt Delta)^(1/2) on f^(k) m0: q^-k (q^(-n-1) - 1)."""
    return RatFunc.q_power(-k) * (RatFunc.q_power(-n - 1) - ONE)


def s_n_factor(n: int, k: int) -> RatFunc:
    """S_n on f^(k) m0: q^(-n-1) (qt Delta)^(-1/2) on weights <= -n-2, identity above."""
    if k >= 0:
        return RatFunc.q_power(-n - 1) * half_inverse_factor(n, k)
    return ONE


def sn_complete_lattice(n: int, window: Optional[int] = None) -> Lattice:
    """q^(-n(n+1)) S_n (qt Delta)^(-n/2) L#, slot by slot."""
    if n < 0:
        raise ValueError(f"sn_complete_lattice needs n >= 0, got {n}")
    window = _window(n, window)
    scale = RatFunc.q_power(-n * (n + 1))
    coeffs = {}
    for j in range(window + 1):
        k = j - n - 1
        factor = scale * half_inverse_factor(n, k) ** n * s_n_factor(n, k)
        coeffs[j] = factor * deodhar_coefficient(n, k)
    log.debug(f"Built S_n lattice for n={n}, window {window}")
    return _diagonal_lattice(n, coeffs, window)


def lemma_units(n: int) -> List[RatFunc]:
    """The units a* of 1/(1 + q^-(i-n-1)) = q^max(0, i-n-1) a* for 0 <= i <= 2n+2."""
    return [q_ratio_unit(i, n) for i in range(2 * n + 3)]


def _move_component(x: Element, component: int) -> Element:
    return Element.from_dict({Slot(component, s.tag, s.k): c for s, c in x.terms})


def complete_lattice(basis: CrystalBasis) -> CrystalBasis:
    """The completion of a standard crystal basis.

    Complete summands keep their lattice; each M(-n-2) is replaced by the
    completed lattice of M(n) with basis the classes of f^(k) m~.

    Raises:
        NonStandardLatticeError: If the input is not the standard crystal basis.
    """
    lattice = basis.lattice
    shape = lattice.shape
    window = lattice.window
    if lattice.frame is not None and not lattice.frame.is_canonical:
        raise NonStandardLatticeError("complete_lattice needs a basis in canonical coordinates")
    standard = standard_lattice(shape, window)
    if not lattice_equal(lattice, standard.lattice):
        raise NonStandardLatticeError(f"Lattice of {shape} is not the standard crystal lattice")

    target, embedding = completion_module(shape)
    shifts = dict(embedding.shifts)
    gens: List[Element] = []
    tails = {}
    for i, comp in enumerate(shape.components):
        if i in shifts:
            n = shifts[i] - 1
            part = complete_verma_lattice(n, window)
            for _, basis_w in part.gens:
                gens.extend(_move_component(b, i) for b in basis_w)
            tails[(i, "m")] = part.tail_map[(0, "m")]
        else:
            for tag in comp.tags:
                top = comp.max_k(tag)
                last = window if top is None else min(top, window)
                gens.extend(Element.of(i, tag, k) for k in range(last + 1))
                if top is None:
                    tails[(i, tag)] = TailLaw(0, 0)
    completed = Lattice.from_generators(target, gens, window, tails)
    reps = tuple(b for _, basis_w in standard_lattice(target, window).lattice.gens for b in basis_w)
    log.info(f"Completed crystal basis of {shape} to {target}")
    return CrystalBasis(completed, reps)
