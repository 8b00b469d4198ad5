"""Recovering a simultaneous U_q / B_q standard decomposition.

Each Casimir block c_n is handled on its own. At weight -n-2 every T(n)
generator z is corrected to the vector z~ of Ker e' with e z~ = e z; the
pair (v, z~) spans a standard copy of T(n). Highest weight vectors killed
by e' that are independent of the T tops give the M(n) summands, and
vectors of Ker e n Ker e' at weight -n-2 give the M(-n-2) summands.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from qcompletion.algebra.actions import act, completion_module, divided_power, ker_e
from qcompletion.algebra.frames import BqFrame
from qcompletion.algebra.linalg import solve
from qcompletion.algebra.modules import (
    TMOD,
    VERMA,
    AlgebraGen,
    ComponentShape,
    Element,
    ModuleShape,
    Slot,
    covered_weights,
    weight_slots,
)
from qcompletion.algebra.qarith import RatFunc
from qcompletion.completion.lattices import verma_generator_coeff
from qcompletion.core.config import LatticeConfig
from qcompletion.core.errors import IsomorphismError, ShapeError, TwistError
from qcompletion.crystal.basis import GeneratorMap, VerificationReport
from qcompletion.crystal.lattice import Lattice
from qcompletion.decomp.twisted import (
    TwistedPresentation,
    check_twist,
    combination,
    default_window,
    kernel_combinations,
    off_block,
    span_rank,
)

log = logging.getLogger(__name__)
log.addHandler(logging.NullHandler())


@dataclass(frozen=True)
class RecoveredPart:
    """One summand of a recovered decomposition.

    Attributes:
        kind: "M" or "T".
        parameter: r for M(r), n for T(n).
        generators: (m,) for M(r); (v, z) for T(n) with e z = f^(n) v.
        correction: z - z_canonical for T parts, the w-component removed
            from the canonical generator.
    """

    kind: str
    parameter: int
    generators: Tuple[Element, ...]
    correction: Optional[Element] = None

    @property
    def component(self) -> ComponentShape:
        return ComponentShape(self.kind, self.parameter)

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            "type": "Verma" if self.kind == VERMA else "T",
            "parameter": self.parameter,
            "generators": [g.to_records() for g in self.generators],
        }
        if self.correction is not None:
            data["correction"] = self.correction.to_records()
        return data


@dataclass(frozen=True)
class DecompositionCertificate:
    """A recovered decomposition of a twisted presentation."""

    presentation: TwistedPresentation
    parts: Tuple[RecoveredPart, ...]

    @property
    def standard_shape(self) -> ModuleShape:
        return ModuleShape(tuple(p.component for p in self.parts))

    @property
    def new_generators(self) -> List[Element]:
        return [g for p in self.parts for g in p.generators]

    @property
    def parameters(self) -> Tuple[List[int], List[int]]:
        """Sorted ({r_i}, {n_j})."""
        rs = sorted(p.parameter for p in self.parts if p.kind == VERMA)
        ns = sorted(p.parameter for p in self.parts if p.kind == TMOD)
        return rs, ns

    def generator_map(self) -> GeneratorMap:
        """The map from the standard shape onto the presentation's base."""
        images = []
        for i, part in enumerate(self.parts):
            for tag, g in zip(part.component.tags, part.generators):
                images.append(((i, tag), g))
        return GeneratorMap(self.standard_shape, self.presentation.base, tuple(images))

    def to_dict(self) -> Dict[str, Any]:
        rs, ns = self.parameters
        return {
            "shape": str(self.presentation.base),
            "standard_shape": str(self.standard_shape),
            "parameters": {"r": rs, "n": ns},
            "parts": [p.to_dict() for p in self.parts],
        }


def _normalized(x: Element) -> Element:
    return x.scale(RatFunc.q_power(-x.min_valuation()))


def _solve_combination(
    vectors: Sequence[Element], constraints: Sequence[Element], target: Element
) -> Optional[Element]:
    """sum c_i vectors[i] with sum c_i constraints[i] = target, or None."""
    slots: List[Slot] = sorted({s for v in list(constraints) + [target] for s in v.slots()})
    if not vectors:
        return None if target else Element.zero()
    rows = [[c.coeff(s) for c in constraints] for s in slots]
    coeffs = solve(rows, target.vector(slots))
    if coeffs is None:
        return None
    return combination(vectors, coeffs)


def _block_kernel(frame: BqFrame, shape: ModuleShape, n: int, weight: int) -> List[Element]:
    """Ker e n Ker e' n (block c_n) at the given weight."""
    images = frame.ker_e_prime(weight)
    constraints = [act(AlgebraGen.E, y, shape) + off_block(y, shape, n) for y in images]
    return [x for x in kernel_combinations(images, constraints) if x]


def _extend_basis(start: List[Element], candidates: Sequence[Element]) -> List[Element]:
    chosen: List[Element] = []
    for x in candidates:
        if span_rank(start + chosen + [x]) > span_rank(start + chosen):
            chosen.append(x)
    return chosen


def _decompose_block(
    presentation: TwistedPresentation, frame: BqFrame, n: int
) -> List[RecoveredPart]:
    shape = presentation.base
    members = [i for i, c in enumerate(shape.components) if c.block == n]
    expected = sorted(str(shape[i]) for i in members)

    if n == -1:
        gens = _extend_basis([], _block_kernel(frame, shape, n, -1))
        parts = [RecoveredPart(VERMA, -1, (_normalized(g),)) for g in gens]
    else:
        bottom = -n - 2
        images = frame.ker_e_prime(bottom)
        constraints = [act(AlgebraGen.E, y, shape) + off_block(y, shape, n) for y in images]
        tees = []
        for j in members:
            if shape[j].kind != TMOD:
                continue
            z = Element.of(j, "z")
            z_tilde = _solve_combination(images, constraints, act(AlgebraGen.E, z, shape))
            if z_tilde is None:
                raise TwistError(
                    "t_generators", f"no standard T({n}) copy reaches e z of component {j}"
                )
            v = Element.of(j, "v")
            tees.append(RecoveredPart(TMOD, n, (v, z_tilde), z_tilde - z))

        tops = _extend_basis([t.generators[0] for t in tees], _block_kernel(frame, shape, n, n))
        highest = [_normalized(h) for h in tops]
        lowered = [
            divided_power(n + 1, g, shape) for g in highest + [t.generators[0] for t in tees]
        ]
        bottoms = _extend_basis(lowered, _block_kernel(frame, shape, n, bottom))
        parts = [RecoveredPart(VERMA, n, (h,)) for h in highest]
        parts += tees
        parts += [RecoveredPart(VERMA, bottom, (_normalized(u),)) for u in bottoms]

    found = sorted(str(p.component) for p in parts)
    if found != expected:
        raise RuntimeError(f"Block c_{n}: recovered {found}, expected {expected}")
    log.debug(f"Block c_{n}: recovered {found}")
    return parts


def decompose(
    presentation: TwistedPresentation, window: Optional[int] = None
) -> DecompositionCertificate:
    """Standard U_q and B_q generators of a twisted presentation.

    Raises:
        ShapeError: If the base has finite-dimensional summands.
        TwistError: If the presentation fails invertibility or a compatibility condition.
    """
    shape = presentation.base
    if shape.has_findim:
        raise ShapeError(f"{shape} has finite-dimensional summands without B_q-structure")
    check_twist(presentation, window)
    frame = presentation.frame
    parts: List[RecoveredPart] = []
    for n in sorted({c.block for c in shape.components}):
        parts.extend(_decompose_block(presentation, frame, n))
    cert = DecompositionCertificate(presentation, tuple(parts))
    log.info(f"Decomposed {presentation.base}: {cert.standard_shape}")
    return cert


def verify_certificate(
    cert: DecompositionCertificate, window: Optional[int] = None
) -> VerificationReport:
    """Check the generator conditions and that the strings span the module."""
    presentation = cert.presentation
    shape = presentation.base
    frame = presentation.frame
    if window is None:
        window = default_window(shape)
    report = VerificationReport(f"decomposition of {presentation}")

    bad_prime = next((g for g in cert.new_generators if frame.e_prime(g)), None)
    report.add("e_prime_kills_generators", bad_prime is None, bad_prime)

    bad_top = None
    bad_pair = None
    for part in cert.parts:
        if part.kind == VERMA:
            if act(AlgebraGen.E, part.generators[0], shape) and bad_top is None:
                bad_top = part.generators[0]
        else:
            v, z = part.generators
            if act(AlgebraGen.E, z, shape) != divided_power(part.parameter, v, shape):
                if bad_pair is None:
                    bad_pair = z
    report.add("verma_generators_highest", bad_top is None, bad_top)
    report.add("t_pairs_e_z_in_v_string", bad_pair is None, bad_pair)

    detail = ""
    try:
        target = cert.generator_map().target_frame()
        missing = [w for w in covered_weights(shape, window) if not target.spans(w)]
        if missing:
            detail = f"strings do not span weights {missing}"
    except IsomorphismError as e:
        detail = str(e)
    report.add("direct_sum", not detail, detail=detail)

    expected = sorted(str(c) for c in shape.components)
    found = sorted(str(c) for c in cert.standard_shape.components)
    report.add(
        "parameters_match",
        expected == found,
        detail="" if expected == found else f"recovered {found}, expected {expected}",
    )
    return report


# ----------------------------------------------------------------------
# Kernel of e as f^k Ker e'
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class KernelCertificate:
    """A vector f^(k) u of Ker e with u in Ker e'."""

    weight: int
    k: int
    u: Element

    def to_dict(self) -> Dict[str, Any]:
        return {"weight": self.weight, "k": self.k, "u": self.u.to_records()}


@dataclass(frozen=True)
class KernelReport:
    shape: ModuleShape
    certificates: Tuple[KernelCertificate, ...]
    defects: Tuple[int, ...]

    @property
    def passed(self) -> bool:
        return not self.defects

    def at(self, weight: int) -> List[KernelCertificate]:
        return [c for c in self.certificates if c.weight == weight]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "shape": str(self.shape),
            "passed": self.passed,
            "defects": list(self.defects),
            "certificates": [c.to_dict() for c in self.certificates],
        }


def verify_kernel_basis(
    shape: ModuleShape, window: Optional[int] = None, frame: Optional[BqFrame] = None
) -> KernelReport:
    """Ker e_w has a basis of vectors f^(k) u, u in Ker e', at every covered weight.

    For each k the vectors f^(k) u in Ker e form a subspace; the check is that
    their dimensions add up to dim Ker e_w.
    """
    if shape.has_findim:
        raise ShapeError(f"{shape} has finite-dimensional summands without B_q-structure")
    if window is None:
        window = default_window(shape)
    frame = frame or BqFrame.canonical(shape)
    images = frame.image_map
    certificates: List[KernelCertificate] = []
    defects: List[int] = []
    for w in covered_weights(shape, window):
        by_k: Dict[int, List[Slot]] = {}
        for s in frame.frame_slots(w):
            by_k.setdefault(s.k, []).append(s)
        found = 0
        for k in sorted(by_k):
            slots = by_k[k]
            heads = [images[s.string] for s in slots]
            vectors = [frame.vector(s) for s in slots]
            constraints = [act(AlgebraGen.E, x, shape) for x in vectors]
            for x in kernel_combinations(heads, constraints):
                certificates.append(KernelCertificate(w, k, x))
                found += 1
        if found != len(ker_e(shape, w)):
            defects.append(w)
    log.debug(f"Kernel certificates for {shape}: {len(certificates)}, defects {defects}")
    return KernelReport(shape, tuple(certificates), tuple(defects))


# ----------------------------------------------------------------------
# Re-decomposition and completion
# ----------------------------------------------------------------------


def redecompose_lowest(
    cert: DecompositionCertificate, a: Any, b: Any, block: Optional[int] = None
) -> DecompositionCertificate:
    """Replace the M(-n-2) generator u by u' = a f^(n+1) h + b u.

    h is the M(n) generator of the same block. The result is again a U_q
    decomposition; u' is not killed by e' unless a = 0.

    Raises:
        ValueError: If b is zero or no block holds both M(n) and M(-n-2).
    """
    a, b = RatFunc.coerce(a), RatFunc.coerce(b)
    if not b:
        raise ValueError("b must be nonzero")
    parts = list(cert.parts)
    shape = cert.presentation.base
    for i, top in enumerate(parts):
        n = top.parameter
        if top.kind != VERMA or n < 0 or (block is not None and n != block):
            continue
        for j, low in enumerate(parts):
            if low.kind == VERMA and low.parameter == -n - 2:
                h, u = top.generators[0], low.generators[0]
                new_u = divided_power(n + 1, h, shape).scale(a) + u.scale(b)
                parts[j] = RecoveredPart(VERMA, low.parameter, (new_u,))
                return DecompositionCertificate(cert.presentation, tuple(parts))
    raise ValueError(f"No block with both M(n) and M(-n-2) in {cert.standard_shape}")


def _completion_top(n: int, target: ModuleShape, image: Element) -> Element:
    """The vector m~ of weight n in C(M) with f^(n+1) m~ = image."""
    slots = weight_slots(target, n)
    bottom_slots = weight_slots(target, -n - 2)
    columns = [divided_power(n + 1, Element.basis(s), target).vector(bottom_slots) for s in slots]
    rows = [[col[i] for col in columns] for i in range(len(bottom_slots))]
    coeffs = solve(rows, image.vector(bottom_slots))
    if coeffs is None:
        raise RuntimeError(f"{image} is not f^({n + 1}) of a vector of C(M)")
    return Element.from_vector(slots, coeffs)


def complete_decomposition(
    cert: DecompositionCertificate, window: Optional[int] = None
) -> Lattice:
    """The A-span in C(M) of the completed strings of a decomposition.

    M(r), r >= -1, and T(n) parts contribute A f^(k) g. An M(-n-2) part with
    generator u contributes the completed lattice of M(n) built on the
    vector m~ with f^(n+1) m~ = u.
    """
    shape = cert.presentation.base
    target, embedding = completion_module(shape)
    if window is None:
        largest = max([0] + [abs(c.block) for c in shape.components])
        window = LatticeConfig().window_for(largest)
    lowest = min(covered_weights(target, window))
    gens: List[Element] = []

    def strings(g: Element, coeff: Optional[Callable[[int], RatFunc]] = None) -> None:
        h = g.weight(target)
        for k in range((h - lowest) // 2 + 1):
            x = divided_power(k, g, target)
            gens.append(x if coeff is None else x.scale(coeff(k)))

    for part in cert.parts:
        if part.kind == VERMA and part.parameter <= -2:
            n = -part.parameter - 2
            u = part.generators[0]
            top = _completion_top(n, target, embedding(u))
            strings(top, lambda i, n=n: verma_generator_coeff(n, i))
        else:
            for g in part.generators:
                strings(embedding(g))
    log.info(f"Completed decomposition of {shape} in {target}")
    return Lattice.from_generators(target, gens, window)
