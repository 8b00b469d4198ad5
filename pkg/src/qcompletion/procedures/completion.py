"""Completion sweeps over the Verma family M(-n-2).

For each n the sweep compares the two constructions of the completed
lattice, runs the completion axioms on the standard basis, tabulates
membership of f^-k m0 in C(M) and checks that complete lattices are
exactly the lattices of complete modules.
"""

from __future__ import annotations

import logging
from itertools import combinations_with_replacement
from typing import Callable, Iterator, List, NamedTuple

from pymeasure.experiment import IntegerParameter, Procedure

from qcompletion.algebra.actions import completion_module, is_complete_module
from qcompletion.algebra.modules import ComponentShape, Element, ModuleShape, format_shape
from qcompletion.algebra.qarith import Q
from qcompletion.completion.deodhar import DeodharSymbol, in_completion
from qcompletion.completion.lattices import (
    complete_lattice,
    complete_verma_lattice,
    lemma_units,
    normalized_verma_lattice,
    sharp_lattice,
    sn_complete_lattice,
)
from qcompletion.completion.verify import is_complete_lattice, verify_lattice_completion
from qcompletion.crystal.basis import standard_lattice, verify_crystal_lattice
from qcompletion.crystal.lattice import lattice_equal

log = logging.getLogger(__name__)
log.addHandler(logging.NullHandler())


class Case(NamedTuple):
    """One sweep case, evaluated lazily."""

    check: str
    n: int
    shape: str
    run: Callable[[], bool]


def verma_family(n: int) -> ModuleShape:
    return ModuleShape((ComponentShape.verma(-n - 2),))


def completion_shapes() -> List[ModuleShape]:
    """M(r) for -5 <= r <= 3, T(n) for 0 <= n <= 3, and their pairwise sums."""
    singles = [ComponentShape.verma(r) for r in range(-5, 4)]
    singles += [ComponentShape.tmod(n) for n in range(4)]
    shapes = [ModuleShape((c,)) for c in singles]
    shapes += [ModuleShape(pair) for pair in combinations_with_replacement(singles, 2)]
    return shapes


def _two_routes(n: int, window: int) -> bool:
    return lattice_equal(sn_complete_lattice(n, window), complete_verma_lattice(n, window))


def _normalized_generators(n: int, window: int) -> bool:
    return lattice_equal(normalized_verma_lattice(n, window), complete_verma_lattice(n, window))


def _axioms(n: int, window: int) -> bool:
    basis = standard_lattice(verma_family(n), window)
    completed = complete_lattice(basis)
    return verify_lattice_completion(basis.lattice, completed.lattice, basis, completed).passed


def _bottom_generator(n: int, window: int) -> bool:
    # f^(n+1) m~ = m0 must be a primitive vector of the completed lattice
    _, embedding = completion_module(verma_family(n))
    m0 = embedding(Element.of(0, "m"))
    lattice = complete_verma_lattice(n, window)
    return lattice.contains(m0) and not lattice.contains(m0.scale(Q.inverse()))


def _sharp_fails(n: int, window: int) -> bool:
    return not verify_crystal_lattice(sharp_lattice(n, window)).passed


def _units(n: int) -> bool:
    return all(a.is_unit() for a in lemma_units(n))


def _deodhar_membership(n: int, k: int) -> bool:
    symbol = DeodharSymbol(k, Element.of(0, "m"))
    return in_completion(symbol, verma_family(n)) == (k < n + 2)


def _complete_lattice_criterion(shape: ModuleShape, window: int) -> bool:
    return is_complete_lattice(standard_lattice(shape, window)) == is_complete_module(shape)


def completion_cases(
    max_n: int, deodhar_max_n: int, window: int, criterion_window: int
) -> Iterator[Case]:
    for n in range(max_n + 1):
        name = format_shape(verma_family(n))
        yield Case("two_route_agreement", n, name, lambda n=n: _two_routes(n, window))
        yield Case("normalized_generators", n, name, lambda n=n: _normalized_generators(n, window))
        yield Case("completion_axioms", n, name, lambda n=n: _axioms(n, window))
        yield Case("bottom_generator", n, name, lambda n=n: _bottom_generator(n, window))
        yield Case("sharp_lattice_not_crystal", n, name, lambda n=n: _sharp_fails(n, window))
        yield Case("lemma_units", n, name, lambda n=n: _units(n))
    for n in range(deodhar_max_n + 1):
        for k in range(1, n + 5):
            name = f"f^-{k} m0 in {format_shape(verma_family(n))}"
            yield Case("deodhar_membership", n, name, lambda n=n, k=k: _deodhar_membership(n, k))
    for shape in completion_shapes():
        yield Case(
            "complete_lattice_criterion",
            -1,
            format_shape(shape),
            lambda s=shape: _complete_lattice_criterion(s, criterion_window),
        )


class CompletionSweepProcedure(Procedure):
    """Completion sweep procedure.

    Emits one row per check for M(-n-2), 0 <= n <= max_n, per Deodhar
    symbol f^-k m0 with 1 <= k <= n+4, and per test shape of the
    complete-lattice criterion.
    """

    max_n = IntegerParameter("Largest n", default=6, minimum=0, maximum=20)
    deodhar_max_n = IntegerParameter("Largest Deodhar n", default=8, minimum=0, maximum=20)
    window = IntegerParameter("Window", default=25, minimum=4, maximum=200)
    criterion_window = IntegerParameter("Criterion window", default=8, minimum=4, maximum=200)

    DATA_COLUMNS = ["Check", "n", "Shape", "Passed"]

    def startup(self):
        """Collect the cases."""
        self.failures = []
        self.cases = list(
            completion_cases(
                int(self.max_n),
                int(self.deodhar_max_n),
                int(self.window),
                int(self.criterion_window),
            )
        )
        log.info(f"Completion sweep: {len(self.cases)} cases, window {self.window}")

    def execute(self):
        """Evaluate every case."""
        total = len(self.cases)
        for i, case in enumerate(self.cases):
            if self.should_stop():
                log.warning("Completion sweep aborted by user")
                return
            passed = case.run()
            if not passed:
                self.failures.append(f"{case.check}({case.shape})")
            self.emit(
                "results",
                {"Check": case.check, "n": case.n, "Shape": case.shape, "Passed": passed},
            )
            self.emit("progress", 100 * (i + 1) / total)

        log.info(f"Completion sweep finished with {len(self.failures)} failures")
