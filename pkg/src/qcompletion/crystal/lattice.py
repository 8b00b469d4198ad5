"""A-lattices in module shapes.

A lattice is stored weight by weight: an echelon A-basis for every
weight whose slots all have k <= window, and for each infinite string an
optional monomial tail law describing the lattice past the window. Tails
are diagonal in the coordinates of the lattice's frame.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

from qcompletion.algebra.actions import Embedding
from qcompletion.algebra.frames import BqFrame, StringKey
from qcompletion.algebra.modules import Element, ModuleShape, Slot, covered_weights, weight_slots
from qcompletion.algebra.qarith import ONE, RatFunc
from qcompletion.core.errors import ContainmentError, ShapeError, WeightError, WindowExceededError
from qcompletion.crystal.dvr import dvr_coordinates, dvr_echelon, saturate

log = logging.getLogger(__name__)
log.addHandler(logging.NullHandler())


@dataclass(frozen=True)
class TailLaw:
    """Lattice coefficient unit * q^(a*k + b) on a string past the window.

    Attributes:
        a: Slope of the valuation in k.
        b: Offset of the valuation.
        unit: A unit of A.
    """

    a: int
    b: int
    unit: RatFunc = ONE

    def coeff(self, k: int) -> RatFunc:
        return self.unit * RatFunc.q_power(self.a * k + self.b)

    def scaled(self, c: RatFunc) -> "TailLaw":
        return TailLaw(self.a, self.b + c.valuation(), self.unit * c.unit_part())

    def same_lattice(self, other: "TailLaw") -> bool:
        """Equal up to a unit of A."""
        return self.a == other.a and self.b == other.b

    @classmethod
    def fit(cls, k1: int, c1: RatFunc, k2: int, c2: RatFunc) -> "TailLaw":
        """The monomial law through two diagonal coefficients.

        Raises:
            ValueError: If the valuations do not lie on an integer line.
        """
        if k1 == k2:
            raise ValueError("TailLaw.fit needs two distinct positions")
        dv = c2.valuation() - c1.valuation()
        if dv % (k2 - k1):
            raise ValueError(f"Valuations {c1.valuation()}, {c2.valuation()} are not on a line")
        a = dv // (k2 - k1)
        b = c2.valuation() - a * k2
        return cls(a, b, c2.unit_part())

    def to_dict(self) -> Dict[str, Any]:
        return {"a": self.a, "b": self.b, "unit": str(self.unit)}


@dataclass(frozen=True)
class Lattice:
    """An A-lattice, explicit on covered weights and monomial on string tails.

    Attributes:
        shape: The module shape.
        window: Largest k kept explicitly on every string.
        gens: (weight, echelon A-basis) for every covered weight.
        tails: (string, tail law) for strings described past the window.
        frame: B_q-frame whose coordinates the tails are diagonal in.
    """

    shape: ModuleShape
    window: int
    gens: Tuple[Tuple[int, Tuple[Element, ...]], ...]
    tails: Tuple[Tuple[StringKey, TailLaw], ...] = ()
    frame: Optional[BqFrame] = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if self.window < 1:
            raise ValueError(f"Lattice window must be >= 1, got {self.window}")
        self._check_tails()

    def _check_tails(self) -> None:
        """Each tail law must give the lattice's own generator at k = window.

        Raises:
            ValueError: If c f^(K) g is not a primitive lattice vector for the
                tail coefficient c at the window K.
        """
        gens = dict(self.gens)
        for key, law in self.tails:
            if self.shape[key[0]].max_k(key[1]) is not None:
                raise ValueError(f"Tail law given for the finite string {key[1]}{key[0]}")
            slot = Slot(key[0], key[1], self.window)
            if self.shape.slot_weight(slot) not in gens:
                continue
            x = self.bq_frame.vector(slot).scale(law.coeff(self.window))
            if not self.contains(x) or self.contains(x.scale(RatFunc.q_power(-1))):
                raise ValueError(
                    f"Tail law q^({law.a}k + {law.b}) of {key[1]}{key[0]} disagrees with "
                    f"the explicit generators at k = {self.window}"
                )

    # ------------------------------------------------------------------
    # Construction
    # ------------------------------------------------------------------

    @classmethod
    def from_generators(
        cls,
        shape: ModuleShape,
        generators: Iterable[Element],
        window: int,
        tails: Optional[Dict[StringKey, TailLaw]] = None,
        frame: Optional[BqFrame] = None,
    ) -> "Lattice":
        """The A-span of weight-vector generators, cut to the covered weights.

        Raises:
            WeightError: If a generator is not a weight vector.
        """
        covered = set(covered_weights(shape, window))
        by_weight: Dict[int, List[Element]] = {w: [] for w in covered}
        for g in generators:
            if not g:
                continue
            w = g.weight(shape)
            if w is None:
                raise WeightError(f"Lattice generator {g} is not a weight vector")
            if w in covered:
                by_weight[w].append(g)
        gens = []
        for w in sorted(by_weight, reverse=True):
            slots = weight_slots(shape, w)
            rows = dvr_echelon([g.vector(slots) for g in by_weight[w]])
            gens.append((w, tuple(Element.from_vector(slots, r) for r in rows)))
        tail_items = tuple(sorted((tails or {}).items()))
        return cls(shape, window, tuple(gens), tail_items, frame)

    @property
    def bq_frame(self) -> BqFrame:
        return self.frame if self.frame is not None else BqFrame.canonical(self.shape)

    @property
    def tail_map(self) -> Dict[StringKey, TailLaw]:
        return dict(self.tails)

    @property
    def weights(self) -> List[int]:
        return [w for w, _ in self.gens]

    def covers(self, weight: int) -> bool:
        return weight in dict(self.gens)

    def basis_at(self, weight: int) -> Tuple[Element, ...]:
        """The echelon A-basis of the weight-w part.

        Below the window, a weight all of whose slots lie past the window on
        strings with tail laws is answered from the tails.

        Raises:
            WindowExceededError: If the weight is neither covered nor tail-determined.
        """
        gens = dict(self.gens)
        if weight in gens:
            return gens[weight]
        slots = weight_slots(self.shape, weight)
        if not slots:
            return ()
        tails = self.tail_map
        if all(s.k > self.window and s.string in tails for s in slots):
            frame = self.bq_frame
            return tuple(frame.vector(s).scale(tails[s.string].coeff(s.k)) for s in slots)
        raise WindowExceededError(f"Weight {weight} is outside the window {self.window}")

    # ------------------------------------------------------------------
    # Membership
    # ------------------------------------------------------------------

    def _echelon_rows(self, weight: int) -> Tuple[List[Slot], List[List[RatFunc]]]:
        slots = weight_slots(self.shape, weight)
        basis = self.basis_at(weight)
        gens = dict(self.gens)
        rows = [b.vector(slots) for b in basis]
        if weight not in gens:
            rows = dvr_echelon(rows)
        return slots, rows

    def coordinates(self, x: Element) -> Dict[int, Optional[List[RatFunc]]]:
        """Per weight, coordinates of x in the echelon basis, None outside the span."""
        parts: Dict[int, Dict[Slot, RatFunc]] = {}
        for slot, c in x.terms:
            self.shape.check_slot(slot)
            parts.setdefault(self.shape.slot_weight(slot), {})[slot] = c
        result = {}
        for w, coeffs in parts.items():
            slots, rows = self._echelon_rows(w)
            result[w] = dvr_coordinates(rows, Element.from_dict(coeffs).vector(slots))
        return result

    def contains(self, x: Element) -> bool:
        """Exact membership of x.

        Raises:
            WindowExceededError: If x has a weight the lattice does not determine.
        """
        for coords in self.coordinates(x).values():
            if coords is None or not all(a.in_ring() for a in coords):
                return False
        return True

    def congruent(self, x: Element, y: Element) -> bool:
        """x = y mod qL."""
        return self.contains((x - y).scale(RatFunc.q_power(-1)))

    def residue(self, x: Element, weight: int) -> Optional[List[Any]]:
        """Class of x in L_w / q L_w as rational coordinates, None if x is not in L."""
        slots, rows = self._echelon_rows(weight)
        coords = dvr_coordinates(rows, x.vector(slots))
        if coords is None or not all(a.in_ring() for a in coords):
            return None
        return [a.value_at_zero() for a in coords]

    # ------------------------------------------------------------------
    # Comparisons and derived lattices
    # ------------------------------------------------------------------

    def rank_defects(self) -> List[int]:
        """Covered weights where the lattice is not of full rank."""
        return [
            w for w, basis in self.gens if len(basis) != len(weight_slots(self.shape, w))
        ]

    def contains_lattice(self, other: "Lattice", weights: Optional[Iterable[int]] = None) -> bool:
        """other <= self on the given (default: common covered) weights."""
        if weights is None:
            weights = set(self.weights) & set(other.weights)
        for w in weights:
            for b in other.basis_at(w):
                if not self.contains(b):
                    return False
        return True

    def scaled(self, c: Any) -> "Lattice":
        """c * L."""
        c = RatFunc.coerce(c)
        gens = tuple((w, tuple(b.scale(c) for b in basis)) for w, basis in self.gens)
        tails = tuple((key, law.scaled(c)) for key, law in self.tails)
        return Lattice(self.shape, self.window, gens, tails, self.frame)

    def restricted(self, window: int) -> "Lattice":
        """The same lattice kept explicitly only up to a smaller window."""
        keep = set(covered_weights(self.shape, window))
        gens = tuple((w, basis) for w, basis in self.gens if w in keep)
        return Lattice(self.shape, window, gens, self.tails, self.frame)

    def intersect_subspace(self, weight: int, vectors: Sequence[Element]) -> List[Element]:
        """An A-basis of L_w intersected with the Q(q)-span of vectors."""
        slots, rows = self._echelon_rows(weight)
        coord_rows = []
        for v in vectors:
            coords = dvr_coordinates(rows, v.vector(slots))
            if coords is None:
                raise ValueError(f"{v} is outside the weight-{weight} space of the lattice")
            coord_rows.append(coords)
        result = []
        for combo in saturate(coord_rows):
            x = Element.zero()
            for a, row in zip(combo, rows):
                if a:
                    x = x + Element.from_vector(slots, row).scale(a)
            result.append(x)
        return result

    def to_dict(self) -> Dict[str, Any]:
        return {
            "shape": self.shape.to_records(),
            "window": self.window,
            "generators": [
                {"weight": w, "rows": [b.to_records() for b in basis]} for w, basis in self.gens
            ],
            "tails": [
                {"component": key[0], "tag": key[1], **law.to_dict()} for key, law in self.tails
            ],
        }


def lattice_contains(lattice: Lattice, x: Element) -> bool:
    return lattice.contains(x)


def lattice_equal(first: Lattice, second: Lattice) -> bool:
    """Mutual containment on the common covered weights plus equal tail laws.

    Raises:
        ShapeError: If the lattices live in different shapes.
    """
    if first.shape != second.shape:
        raise ShapeError(f"Cannot compare lattices of {first.shape} and {second.shape}")
    common = set(first.weights) & set(second.weights)
    if not common:
        raise WindowExceededError("Lattices share no covered weight")
    if not (first.contains_lattice(second, common) and second.contains_lattice(first, common)):
        return False
    t1, t2 = first.tail_map, second.tail_map
    if set(t1) != set(t2):
        return False
    return all(t1[key].same_lattice(t2[key]) for key in t1)


def lattice_intersect_subspace(
    lattice: Lattice, weight: int, vectors: Sequence[Element]
) -> List[Element]:
    return lattice.intersect_subspace(weight, vectors)


def diagonal_tails(shape: ModuleShape, law: TailLaw = TailLaw(0, 0)) -> Dict[StringKey, TailLaw]:
    """The same tail law on every infinite string."""
    return {
        key: law for key in shape.strings() if shape[key[0]].max_k(key[1]) is None
    }


def quotient_lattice(ltilde: Lattice, lcap: Lattice, embedding: Embedding) -> Lattice:
    """The image of Ltilde in C(M)/M, a lattice of a sum of V(n).

    Raises:
        ContainmentError: If lcap is not contained in ltilde.
        ShapeError: If the lattices do not live in C(M).
    """
    if ltilde.shape != embedding.target or lcap.shape != embedding.target:
        raise ShapeError("quotient_lattice needs lattices of the completed shape")
    if not ltilde.contains_lattice(lcap):
        raise ContainmentError("The sublattice is not contained in the completed lattice")
    quotient = embedding.quotient_shape()
    window = max([1] + [c.parameter for c in quotient.components])
    gens = []
    for w in covered_weights(quotient, window):
        for b in ltilde.basis_at(w):
            image = embedding.project(b)
            if image:
                gens.append(image)
    log.debug(f"Quotient lattice of {ltilde.shape} by M lives in {quotient}")
    return Lattice.from_generators(quotient, gens, window)
