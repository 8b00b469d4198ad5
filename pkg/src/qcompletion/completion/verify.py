"""Completion axioms for crystal lattices and bases.

For a crystal lattice L of M and a lattice L~ of C(M):

    (i)   L^e <= L~ and L~ is not a proper sublattice of L,
    (ii)  L~ n M = L~ n L,
    (iii) L~ / (L~ n L) is a crystal lattice of C(M)/M,

and, for bases, the classes of B~ in C(M)/M form a crystal basis there.
L^e denotes L n Ker e. Every check runs on the weights both lattices
determine.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence

from qcompletion.algebra.actions import (
    Embedding,
    Kashiwara,
    completion_module,
    ker_e,
)
from qcompletion.algebra.modules import Element, ModuleShape, weight_slots
from qcompletion.core.errors import ShapeError
from qcompletion.crystal.basis import (
    ConditionResult,
    CrystalBasis,
    VerificationReport,
    apply_kashiwara,
    standard_lattice,
    verify_crystal_basis,
    verify_crystal_lattice,
)
from qcompletion.crystal.dvr import dvr_coordinates, dvr_echelon
from qcompletion.crystal.lattice import Lattice, quotient_lattice

log = logging.getLogger(__name__)
log.addHandler(logging.NullHandler())


@dataclass
class CompletionReport:
    """Outcome of the completion axioms, one result per condition.

    Attributes:
        cond_i: L^e <= L~ and L~ not a proper sublattice of L.
        cond_ii: L~ n M = L~ n L.
        cond_iii: The quotient lattice is a crystal lattice of C(M)/M.
        basis_cond: B~ induces a crystal basis of C(M)/M.
        kernel_cond: L~^e_(-n-2) = L^e_(-n-2) for every block n.
        quotient_report: Full verification of the quotient, if one was built.
    """

    cond_i: ConditionResult
    cond_ii: ConditionResult
    cond_iii: ConditionResult
    basis_cond: ConditionResult
    kernel_cond: ConditionResult
    quotient_report: Optional[VerificationReport] = field(default=None, repr=False)

    @property
    def conditions(self) -> List[ConditionResult]:
        return [self.cond_i, self.cond_ii, self.cond_iii, self.basis_cond, self.kernel_cond]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.conditions)

    def failures(self) -> List[ConditionResult]:
        return [c for c in self.conditions if not c.passed]

    def to_dict(self) -> Dict[str, Any]:
        out: Dict[str, Any] = {"passed": self.passed}
        for c in self.conditions:
            out[c.name] = c.to_dict()
        if self.quotient_report is not None:
            out["quotient"] = self.quotient_report.to_dict()
        return out

    def __str__(self) -> str:
        lines = [f"completion: {'PASS' if self.passed else 'FAIL'}"]
        for c in self.conditions:
            mark = "ok  " if c.passed else "FAIL"
            line = f"  [{mark}] {c.name}"
            if c.detail:
                line += f": {c.detail}"
            if c.witness is not None:
                line += f" (witness {c.witness})"
            lines.append(line)
        return "\n".join(lines)


def lattice_kernel_part(lattice: Lattice, weight: int) -> List[Element]:
    """An A-basis of L^e_w = L_w n Ker e."""
    kernel = ker_e(lattice.shape, weight)
    if not kernel:
        return []
    return lattice.intersect_subspace(weight, kernel)


def _checked_weights(lattice: Lattice, ltilde: Lattice) -> List[int]:
    shape = lattice.shape
    return [w for w in ltilde.weights if lattice.covers(w) or not weight_slots(shape, w)]


def _module_image(embedding: Embedding, weight: int) -> List[Element]:
    return [embedding(Element.basis(s)) for s in weight_slots(embedding.source, weight)]


def _in_lattice(lattice: Lattice, embedding: Embedding, y: Element) -> bool:
    x = embedding.pullback(y)
    return x is not None and lattice.contains(x)


def _condition_i(
    lattice: Lattice, ltilde: Lattice, embedding: Embedding, weights: Sequence[int]
) -> ConditionResult:
    for w in weights:
        for x in lattice_kernel_part(lattice, w):
            if not ltilde.contains(embedding(x)):
                return ConditionResult("cond_i", False, x, f"L^e_{w} is not inside L~")
    tilde_in_l = all(
        _in_lattice(lattice, embedding, b) for w in weights for b in ltilde.basis_at(w)
    )
    witness = None
    for w in weights:
        for b in lattice.basis_at(w):
            if not ltilde.contains(embedding(b)):
                witness = b
                break
        if witness is not None:
            break
    if tilde_in_l and witness is not None:
        return ConditionResult("cond_i", False, witness, "L~ is a proper sublattice of L")
    return ConditionResult("cond_i", True)


def _cap_with_module(
    ltilde: Lattice, embedding: Embedding, weights: Sequence[int]
) -> Dict[int, List[Element]]:
    caps = {}
    for w in weights:
        image = _module_image(embedding, w)
        caps[w] = ltilde.intersect_subspace(w, image) if image else []
    return caps


def _condition_ii(
    lattice: Lattice, embedding: Embedding, caps: Dict[int, List[Element]]
) -> ConditionResult:
    for w, basis in caps.items():
        for y in basis:
            if not _in_lattice(lattice, embedding, y):
                return ConditionResult(
                    "cond_ii", False, y, f"L~ n M is not inside L at weight {w}"
                )
    return ConditionResult("cond_ii", True)


def _kernel_condition(
    lattice: Lattice, ltilde: Lattice, embedding: Embedding
) -> ConditionResult:
    blocks = sorted({c.block for c in embedding.source.components if c.block >= 0})
    for n in blocks:
        w = -n - 2
        if not (lattice.covers(w) and ltilde.covers(w)):
            continue
        for x in lattice_kernel_part(lattice, w):
            if not ltilde.contains(embedding(x)):
                return ConditionResult("kernel_cond", False, x, f"L^e_{w} is not inside L~^e_{w}")
        for y in lattice_kernel_part(ltilde, w):
            if not _in_lattice(lattice, embedding, y):
                return ConditionResult("kernel_cond", False, y, f"L~^e_{w} is not inside L^e_{w}")
    return ConditionResult("kernel_cond", True)


def verify_lattice_completion(
    lattice: Lattice,
    ltilde: Lattice,
    basis: Optional[CrystalBasis] = None,
    btilde: Optional[CrystalBasis] = None,
) -> CompletionReport:
    """Check that ltilde is a completion of lattice (and btilde of basis).

    Without btilde, the basis condition uses the classes of the slot
    vectors f^(k) g of C(M).

    Raises:
        ShapeError: If ltilde does not live in C(M).
    """
    target, embedding = completion_module(lattice.shape)
    if ltilde.shape != target:
        raise ShapeError(f"Completed lattice lives in {ltilde.shape}, expected {target}")
    if basis is not None and basis.shape != lattice.shape:
        raise ShapeError(f"Basis of {basis.shape} does not match lattice of {lattice.shape}")
    if btilde is not None and btilde.shape != target:
        raise ShapeError(f"Completed basis of {btilde.shape} does not match {target}")

    weights = _checked_weights(lattice, ltilde)
    log.debug(f"Checking completion of {lattice.shape} on {len(weights)} weights")
    cond_i = _condition_i(lattice, ltilde, embedding, weights)
    caps = _cap_with_module(ltilde, embedding, weights)
    cond_ii = _condition_ii(lattice, embedding, caps)
    kernel_cond = _kernel_condition(lattice, ltilde, embedding)

    if not embedding.shifts:
        detail = "M is complete, C(M)/M = 0"
        report = CompletionReport(
            cond_i,
            cond_ii,
            ConditionResult("cond_iii", True, detail=detail),
            ConditionResult("basis_cond", True, detail=detail),
            kernel_cond,
        )
        log.info(f"Completion of {lattice.shape}: {report.passed}")
        return report

    lcap = Lattice.from_generators(
        target, [y for ys in caps.values() for y in ys], ltilde.window
    )
    quotient = quotient_lattice(ltilde, lcap, embedding)
    lattice_report = verify_crystal_lattice(quotient)
    failed = [c.name for c in lattice_report.failures()]
    cond_iii = ConditionResult(
        "cond_iii",
        lattice_report.passed,
        detail=f"quotient fails {failed}" if failed else "",
    )

    reps_source = btilde if btilde is not None else standard_lattice(target, ltilde.window)
    quotient_shape = quotient.shape
    reps = []
    for b in reps_source.basis_reps:
        w = b.weight(target)
        if w is None or not weight_slots(quotient_shape, w):
            continue
        image = embedding.project(b)
        if image:
            reps.append(image)
    basis_report = verify_crystal_basis(CrystalBasis(quotient, tuple(reps)))
    failed = [c.name for c in basis_report.failures()]
    basis_cond = ConditionResult(
        "basis_cond",
        basis_report.passed,
        detail=f"induced basis of C(M)/M fails {failed}" if failed else "",
    )
    report = CompletionReport(cond_i, cond_ii, cond_iii, basis_cond, kernel_cond, basis_report)
    log.info(f"Completion of {lattice.shape}: {report.passed}")
    return report


def _same_span(xs: Sequence[Element], ys: Sequence[Element], slots) -> bool:
    if len(xs) != len(ys):
        return False
    rows_x = dvr_echelon([x.vector(slots) for x in xs])
    rows_y = dvr_echelon([y.vector(slots) for y in ys])
    for rows, others in ((rows_x, ys), (rows_y, xs)):
        for v in others:
            coords = dvr_coordinates(rows, v.vector(slots))
            if coords is None or not all(a.in_ring() for a in coords):
                return False
    return True


def is_complete_lattice(basis: CrystalBasis) -> bool:
    """True iff f~^(n+1): L^e_n -> L^e_(-n-2) is bijective for every block n >= 0."""
    lattice = basis.lattice
    shape: ModuleShape = lattice.shape
    if shape.has_findim:
        log.debug(f"{shape} has finite-dimensional summands, not complete")
        return False
    blocks = sorted({c.block for c in shape.components if c.block >= 0})
    for n in blocks:
        top = lattice_kernel_part(lattice, n)
        bottom = lattice_kernel_part(lattice, -n - 2)
        if not top and not bottom:
            continue
        images = []
        for x in top:
            for _ in range(n + 1):
                x = apply_kashiwara(Kashiwara.F_TILDE, x, lattice)
            images.append(x)
        if not _same_span(images, bottom, weight_slots(shape, -n - 2)):
            log.debug(f"f~^{n + 1} is not bijective on L^e_{n} of {shape}")
            return False
    return True
