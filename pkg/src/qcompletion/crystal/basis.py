"""Crystal bases, standard crystal bases and axiom verification.

Two senses are supported. Shapes without V(n) summands use the B_q sense:
Kashiwara operators come from M = sum f^(k) Ker e' and f~ never kills a
basis class. Shapes made only of V(n) summands use the finite-dimensional
sense: operators come from sl2 strings and f~ may kill the bottom of a
string. Mixed shapes have no defined sense.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

from sympy import Matrix, Rational

from qcompletion.algebra.actions import Kashiwara, act, divided_power, ker_e
from qcompletion.algebra.frames import BqFrame, StringKey
from qcompletion.algebra.modules import (
    AlgebraGen,
    Element,
    ModuleShape,
    Slot,
    covered_weights,
    weight_slots,
)
from qcompletion.core.config import LatticeConfig
from qcompletion.core.errors import IsomorphismError, ShapeError, WeightError, WindowExceededError
from qcompletion.crystal.lattice import Lattice, diagonal_tails

log = logging.getLogger(__name__)
log.addHandler(logging.NullHandler())

BQ_SENSE = "bq"
FINDIM_SENSE = "findim"


# ----------------------------------------------------------------------
# Reports
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class ConditionResult:
    """Outcome of one checked condition.

    Attributes:
        name: Condition name.
        passed: Whether the condition holds.
        witness: A vector violating the condition, if any.
        detail: Human-readable explanation of the failure.
    """

    name: str
    passed: bool
    witness: Optional[Element] = None
    detail: str = ""

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {"name": self.name, "passed": self.passed}
        if self.witness is not None:
            data["witness"] = self.witness.to_records()
        if self.detail:
            data["detail"] = self.detail
        return data


@dataclass
class VerificationReport:
    """Per-condition pass/fail with witnesses."""

    subject: str
    conditions: List[ConditionResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.conditions)

    def add(
        self, name: str, passed: bool, witness: Optional[Element] = None, detail: str = ""
    ) -> ConditionResult:
        result = ConditionResult(name, passed, witness, detail)
        self.conditions.append(result)
        return result

    def extend(self, other: "VerificationReport", prefix: str = "") -> None:
        for c in other.conditions:
            self.conditions.append(ConditionResult(prefix + c.name, c.passed, c.witness, c.detail))

    def failures(self) -> List[ConditionResult]:
        return [c for c in self.conditions if not c.passed]

    def condition(self, name: str) -> ConditionResult:
        for c in self.conditions:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "subject": self.subject,
            "passed": self.passed,
            "conditions": [c.to_dict() for c in self.conditions],
        }

    def __str__(self) -> str:
        lines = [f"{self.subject}: {'PASS' if self.passed else 'FAIL'}"]
        for c in self.conditions:
            line = f"  [{'ok' if c.passed else 'FAIL'}] {c.name}"
            if c.detail:
                line += f" - {c.detail}"
            if c.witness is not None:
                line += f" (witness {c.witness})"
            lines.append(line)
        return "\n".join(lines)


# ----------------------------------------------------------------------
# Crystal bases
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class CrystalBasis:
    """A lattice and representatives of a basis of L/qL.

    Attributes:
        lattice: The crystal lattice.
        basis_reps: Representatives, one per basis class, on covered weights.
    """

    lattice: Lattice
    basis_reps: Tuple[Element, ...]

    @property
    def shape(self) -> ModuleShape:
        return self.lattice.shape

    def reps_at(self, weight: int) -> List[Tuple[int, Element]]:
        shape = self.shape
        return [(i, b) for i, b in enumerate(self.basis_reps) if b.weight(shape) == weight]


def crystal_sense(shape: ModuleShape) -> str:
    """BQ_SENSE for shapes without V(n), FINDIM_SENSE for shapes made of V(n).

    Raises:
        ShapeError: For shapes mixing both.
    """
    if not shape.has_findim:
        return BQ_SENSE
    if shape.all_findim:
        return FINDIM_SENSE
    raise ShapeError(f"{shape} mixes finite-dimensional and B_q summands")


def apply_kashiwara(direction: Kashiwara, x: Element, lattice: Lattice) -> Element:
    """e~ or f~ in the lattice's frame."""
    return lattice.bq_frame.kashiwara(direction, x)


def standard_lattice(shape: ModuleShape, window: Optional[int] = None) -> CrystalBasis:
    """The direct sum of the canonical crystal bases of the summands.

    Every string contributes A f^(k) g and the class of f^(k) g.
    """
    if window is None:
        largest = max([0] + [abs(c.parameter) for c in shape.components])
        window = LatticeConfig().window_for(largest)
    reps = []
    for w in covered_weights(shape, window):
        reps.extend(Element.basis(s) for s in weight_slots(shape, w))
    lattice = Lattice.from_generators(shape, reps, window, diagonal_tails(shape))
    return CrystalBasis(lattice, tuple(reps))


def _tail_conditions(report: VerificationReport, lattice: Lattice) -> None:
    e_bad = [key for key, law in lattice.tails if law.a < 0]
    f_bad = [key for key, law in lattice.tails if law.a > 0]
    report.add(
        "tail_e_tilde_stable",
        not e_bad,
        detail=f"tail slope negative on strings {e_bad}" if e_bad else "",
    )
    report.add(
        "tail_f_tilde_stable",
        not f_bad,
        detail=f"tail slope positive on strings {f_bad}" if f_bad else "",
    )


def verify_crystal_lattice(lattice: Lattice) -> VerificationReport:
    """Check, within the window, that L is free of full rank and stable under e~ and f~."""
    sense = crystal_sense(lattice.shape)
    report = VerificationReport(f"crystal lattice of {lattice.shape} ({sense} sense)")

    defects = lattice.rank_defects()
    report.add(
        "lattice_full_rank",
        not defects,
        detail=f"rank deficient at weights {defects}" if defects else "",
    )

    for name, direction, step in (
        ("e_tilde_stable", Kashiwara.E_TILDE, 2),
        ("f_tilde_stable", Kashiwara.F_TILDE, -2),
    ):
        witness = None
        for w in lattice.weights:
            if witness is not None:
                break
            if not lattice.covers(w + step) and weight_slots(lattice.shape, w + step):
                continue
            for b in lattice.basis_at(w):
                image = apply_kashiwara(direction, b, lattice)
                if image and not lattice.contains(image):
                    witness = b
                    break
        detail = "image leaves the lattice" if witness is not None else ""
        report.add(name, witness is None, witness, detail)

    if sense == BQ_SENSE:
        _tail_conditions(report, lattice)
    log.debug(f"Verified {report.subject}: {report.passed}")
    return report


def _residue_rank(vectors: Sequence[Sequence[Fraction]]) -> int:
    if not vectors:
        return 0
    return Matrix([[Rational(x.numerator, x.denominator) for x in v] for v in vectors]).rank()


def _match_class(
    residue: Optional[List[Fraction]], classes: Mapping[int, List[Fraction]]
) -> Optional[int]:
    for index, cls in classes.items():
        if cls == residue:
            return index
    return None


def verify_crystal_basis(basis: CrystalBasis) -> VerificationReport:
    """Check the lattice axioms and the basis axioms within the window.

    In the B_q sense: e~B in B or 0, f~B in B, and b = f~ e~ b whenever e~b is
    in B. In the finite-dimensional sense: f~B in B or 0, and f~b = b' iff
    e~b' = b.
    """
    lattice = basis.lattice
    shape = lattice.shape
    sense = crystal_sense(shape)
    report = VerificationReport(f"crystal basis of {shape} ({sense} sense)")
    report.extend(verify_crystal_lattice(lattice))

    residues: Dict[int, Dict[int, List[Fraction]]] = {}
    bad_basis: Optional[Element] = None
    for w in lattice.weights:
        reps = basis.reps_at(w)
        classes = {}
        for i, b in reps:
            r = lattice.residue(b, w)
            if r is None:
                if bad_basis is None:
                    bad_basis = b
                continue
            classes[i] = r
        dim = len(weight_slots(shape, w))
        independent = len(reps) == dim and _residue_rank(list(classes.values())) == dim
        if bad_basis is None and not independent:
            bad_basis = reps[0][1] if reps else Element.zero()
        residues[w] = classes
    report.add(
        "basis_of_L_mod_qL",
        bad_basis is None,
        bad_basis,
        "classes do not form a basis of L/qL" if bad_basis is not None else "",
    )
    if bad_basis is not None:
        return report

    def image_class(direction: Kashiwara, b: Element, w: int) -> Tuple[bool, Optional[int], bool]:
        """(known, matched index, is zero mod qL) of e~b or f~b."""
        target = w + 2 if direction is Kashiwara.E_TILDE else w - 2
        image = apply_kashiwara(direction, b, lattice)
        if not image:
            return True, None, True
        if target not in residues:
            return False, None, False
        r = lattice.residue(image, target)
        if r is None:
            return True, None, False
        if not any(r):
            return True, None, True
        return True, _match_class(r, residues[target]), False

    e_witness = f_witness = pair_witness = None
    index_of = {i: b for i, b in enumerate(basis.basis_reps)}
    for w in lattice.weights:
        for i, b in basis.reps_at(w):
            known, j, zero = image_class(Kashiwara.E_TILDE, b, w)
            if known and j is None and not zero and e_witness is None:
                e_witness = b
            known_f, jf, zero_f = image_class(Kashiwara.F_TILDE, b, w)
            if known_f:
                f_ok = jf is not None or (zero_f and sense == FINDIM_SENSE)
                if not f_ok and f_witness is None:
                    f_witness = b
            if sense == BQ_SENSE:
                if known and j is not None:
                    back = apply_kashiwara(Kashiwara.F_TILDE, index_of[j], lattice)
                    if not lattice.congruent(back, b) and pair_witness is None:
                        pair_witness = b
            else:
                if known_f and jf is not None:
                    ke, je, _ = image_class(Kashiwara.E_TILDE, index_of[jf], w - 2)
                    if ke and je != i and pair_witness is None:
                        pair_witness = b
                if known and j is not None:
                    kf, jb, _ = image_class(Kashiwara.F_TILDE, index_of[j], w + 2)
                    if kf and jb != i and pair_witness is None:
                        pair_witness = b

    report.add("e_tilde_B_in_B_or_0", e_witness is None, e_witness)
    report.add(
        "f_tilde_B_in_B" if sense == BQ_SENSE else "f_tilde_B_in_B_or_0",
        f_witness is None,
        f_witness,
        "f~b is not a basis class mod qL" if f_witness is not None else "",
    )
    report.add(
        "b_equals_f_tilde_e_tilde_b" if sense == BQ_SENSE else "f_tilde_e_tilde_pairing",
        pair_witness is None,
        pair_witness,
    )
    return report


# ----------------------------------------------------------------------
# Transport along B_q-isomorphisms
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class GeneratorMap:
    """A map sending each string generator of source to a vector of target.

    The map extends f-linearly: f^(k) g -> f^(k) phi(g). Source strings are
    matched to target strings of the same summand type in order.

    Attributes:
        source: Shape of the domain.
        target: Shape of the codomain.
        images: (source string, image in target) pairs; missing strings map
            to the matching canonical generator.
    """

    source: ModuleShape
    target: ModuleShape
    images: Tuple[Tuple[StringKey, Element], ...] = ()

    @classmethod
    def identity(cls, shape: ModuleShape) -> "GeneratorMap":
        return cls(shape, shape, ())

    @classmethod
    def scaling(cls, shape: ModuleShape, key: StringKey, c: Any) -> "GeneratorMap":
        return cls(shape, shape, ((key, Element.of(key[0], key[1]).scale(c)),))

    def key_map(self) -> Dict[StringKey, StringKey]:
        """Source string -> target string, matching summands in order."""
        used: set = set()
        components: Dict[int, int] = {}
        for i, comp in enumerate(self.source.components):
            for j, other in enumerate(self.target.components):
                if j not in used and other == comp:
                    used.add(j)
                    components[i] = j
                    break
            else:
                raise IsomorphismError(f"{comp} has no partner in {self.target}")
        return {(i, tag): (components[i], tag) for i, tag in self.source.strings()}

    def image_map(self) -> Dict[StringKey, Element]:
        keys = self.key_map()
        full = {key: Element.of(*keys[key]) for key in self.source.strings()}
        full.update(dict(self.images))
        return full

    def target_frame(self, source_frame: Optional[BqFrame] = None) -> BqFrame:
        """Frame of the target whose generators are the images of the source frame's."""
        keys = self.key_map()
        source_frame = source_frame or BqFrame.canonical(self.source)
        images = {keys[key]: self(image) for key, image in source_frame.images}
        try:
            return BqFrame.from_mapping(self.target, images)
        except (WeightError, ShapeError) as e:
            raise IsomorphismError(f"Generator map is not weight-preserving: {e}") from e

    def __call__(self, x: Element) -> Element:
        images = self.image_map()
        result = Element.zero()
        for slot, c in x.terms:
            self.source.check_slot(slot)
            result = result + divided_power(slot.k, images[slot.string], self.target).scale(c)
        return result


def transport_basis(iso: GeneratorMap, basis: CrystalBasis) -> CrystalBasis:
    """(phi(L), phi(B)) for a B_q-isomorphism phi.

    The target carries the B_q-structure whose Ker e' is spanned by the
    images of the source generators.

    Raises:
        IsomorphismError: If phi is not weight-preserving or not bijective on
            a covered weight space.
    """
    lattice = basis.lattice
    if lattice.shape != iso.source:
        raise IsomorphismError(f"Basis lives in {lattice.shape}, map starts at {iso.source}")
    frame = iso.target_frame(lattice.frame)
    for w in covered_weights(iso.target, lattice.window):
        if not frame.spans(w):
            raise IsomorphismError(f"Generator map is not bijective at weight {w}")
    for key, image in iso.images:
        if image.weight(iso.target) != iso.source[key[0]].head_weight(key[1]):
            raise IsomorphismError(f"Image of {key} changes its weight")

    keys = iso.key_map()
    gens = [iso(b) for _, basis_w in lattice.gens for b in basis_w]
    tails = {keys[key]: law for key, law in lattice.tails}
    image = Lattice.from_generators(iso.target, gens, lattice.window, tails, frame)
    log.info(f"Transported crystal basis of {iso.source} to {iso.target}")
    return CrystalBasis(image, tuple(iso(b) for b in basis.basis_reps))


def check_strong_isomorphism(iso: GeneratorMap, window: int = 6) -> VerificationReport:
    """Weight preservation, U_q-compatibility on generators and Ker e preservation."""
    report = VerificationReport(f"strong isomorphism {iso.source} -> {iso.target}")
    images = iso.image_map()

    bad_weight = None
    for key, image in images.items():
        if image.weight(iso.target) != iso.source[key[0]].head_weight(key[1]):
            bad_weight = image
            break
    report.add("weight_preserving", bad_weight is None, bad_weight)

    bad_e = None
    for key in iso.source.strings():
        g = Element.of(*key)
        if act(AlgebraGen.E, iso(g), iso.target) != iso(act(AlgebraGen.E, g, iso.source)):
            bad_e = g
            break
    report.add("commutes_with_e", bad_e is None, bad_e)

    bad_ker = None
    for w in covered_weights(iso.source, window):
        for x in ker_e(iso.source, w):
            if act(AlgebraGen.E, iso(x), iso.target):
                bad_ker = x
                break
        if bad_ker is not None:
            break
    report.add("preserves_ker_e", bad_ker is None, bad_ker)
    return report


def string_parameters(basis: CrystalBasis) -> Tuple[List[int], List[int]]:
    """The multisets {r_i} and {n_j} of a crystal basis in the B_q sense.

    Heads are classes killed by e~. A head outside Ker e is the z-generator
    of a T(n) summand with weight -n-2; the remaining Ker e heads, minus one
    v-head of weight n per T(n), give the Verma parameters.
    """
    lattice = basis.lattice
    shape = lattice.shape
    if crystal_sense(shape) != BQ_SENSE:
        raise ShapeError("string parameters are defined in the B_q sense")
    heads = []
    for w in lattice.weights:
        for _, b in basis.reps_at(w):
            image = apply_kashiwara(Kashiwara.E_TILDE, b, lattice)
            if not image:
                heads.append((w, b))
            elif lattice.covers(w + 2):
                r = lattice.residue(image, w + 2)
                if r is not None and not any(r):
                    heads.append((w, b))
    ns = sorted(-w - 2 for w, b in heads if act(AlgebraGen.E, b, shape))
    ker_heads = sorted(w for w, b in heads if not act(AlgebraGen.E, b, shape))
    rs = list(ker_heads)
    for n in ns:
        if n not in rs:
            raise WindowExceededError(f"T({n}) head without its v-head inside the window")
        rs.remove(n)
    return sorted(rs), ns


def residue_slot(basis: CrystalBasis, index: int) -> Optional[Slot]:
    """The frame slot of a basis representative, when it is a single frame vector."""
    rep = basis.basis_reps[index]
    coords = basis.lattice.bq_frame.to_frame(rep)
    if len(coords.terms) == 1:
        return coords.terms[0][0]
    return None
