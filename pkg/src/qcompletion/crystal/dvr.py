"""Linear algebra over the discrete valuation ring A with uniformizer q.

A = {x in Q(q) : ord x >= 0}. Row operations with multipliers in A and
divisions by units of A keep the A-span of a row set unchanged, so
valuation-pivot elimination yields echelon A-bases of lattices.
"""

from __future__ import annotations

import logging
from typing import List, Optional, Sequence, Tuple

from qcompletion.algebra.linalg import row_echelon
from qcompletion.algebra.modules import Element, ModuleShape, Slot, weight_slots
from qcompletion.algebra.qarith import ZERO, RatFunc
from qcompletion.core.errors import WeightError

log = logging.getLogger(__name__)
log.addHandler(logging.NullHandler())

Row = List[RatFunc]


def _first_nonzero(row: Sequence[RatFunc]) -> Optional[int]:
    for c, x in enumerate(row):
        if x:
            return c
    return None


def _axpy(row: Row, factor: RatFunc, pivot_row: Sequence[RatFunc]) -> Row:
    """row - factor * pivot_row."""
    return [a - factor * b if b else a for a, b in zip(row, pivot_row)]


def dvr_echelon(rows: Sequence[Sequence[RatFunc]]) -> List[Row]:
    """Echelon A-basis of the A-span of rows.

    Column by column, the row of least valuation in that column becomes
    the pivot, is rescaled by a unit so the pivot is a power of q, and
    clears the column from the other remaining rows. Zero rows are dropped.
    Each returned row's pivot is its first nonzero entry, and pivot
    columns increase.
    """
    remaining = [list(r) for r in rows if any(r)]
    if not remaining:
        return []
    n_cols = len(remaining[0])
    result: List[Row] = []
    for c in range(n_cols):
        candidates = [i for i, r in enumerate(remaining) if r[c]]
        if not candidates:
            continue
        best = min(candidates, key=lambda i: remaining[i][c].valuation())
        pivot_row = remaining.pop(best)
        unit = pivot_row[c].unit_part()
        pivot_row = [x / unit if x else x for x in pivot_row]
        pivot = pivot_row[c]
        updated = []
        for r in remaining:
            if r[c]:
                r = _axpy(r, r[c] / pivot, pivot_row)
            if any(r):
                updated.append(r)
        remaining = updated
        result.append(pivot_row)
        if not remaining:
            break
    return result


def dvr_coordinates(echelon: Sequence[Sequence[RatFunc]], x: Sequence[RatFunc]) -> Optional[Row]:
    """Coefficients a with x = sum a_i echelon_i over Q(q), or None if x is outside the span."""
    residual = list(x)
    coords: Row = []
    for row in echelon:
        c = _first_nonzero(row)
        if c is None:
            coords.append(ZERO)
            continue
        a = residual[c] / row[c] if residual[c] else ZERO
        coords.append(a)
        if a:
            residual = _axpy(residual, a, row)
    if any(residual):
        return None
    return coords


def dvr_member(echelon: Sequence[Sequence[RatFunc]], x: Sequence[RatFunc]) -> bool:
    """Whether x lies in the A-span of an echelon A-basis."""
    coords = dvr_coordinates(echelon, x)
    return coords is not None and all(a.in_ring() for a in coords)


def saturate(rows: Sequence[Sequence[RatFunc]]) -> List[Row]:
    """An A-basis of A^d intersected with the Q(q)-span of rows.

    The span is first given an independent basis; then, repeatedly, the
    entry of least valuation outside the chosen rows and pivot columns is
    scaled to 1 and its column cleared from every other row. The result
    is integral with an identity submatrix on the pivot columns.
    """
    basis = [list(r) for r in rows if any(r)]
    if not basis:
        return []
    n_cols = len(basis[0])
    free_vars = row_echelon(basis)
    rank = n_cols - len(free_vars)
    basis = basis[:rank]

    chosen: List[int] = []
    pivots: List[int] = []
    while len(chosen) < rank:
        best: Optional[Tuple[int, int, int]] = None
        for i, r in enumerate(basis):
            if i in chosen:
                continue
            for c, x in enumerate(r):
                if c in pivots or not x:
                    continue
                v = x.valuation()
                if best is None or v < best[0]:
                    best = (v, i, c)
        if best is None:
            raise RuntimeError("saturation lost rank")
        _, i, c = best
        scale = basis[i][c]
        basis[i] = [x / scale if x else x for x in basis[i]]
        for j in range(rank):
            if j != i and basis[j][c]:
                basis[j] = _axpy(basis[j], basis[j][c], basis[i])
        chosen.append(i)
        pivots.append(c)
    return [basis[i] for i in chosen]


def dvr_reduce(gens: Sequence[Element], weight: int, shape: ModuleShape) -> List[Element]:
    """Echelon A-basis of the A-span of weight-w generators.

    Raises:
        WeightError: If a generator has a term outside the weight.
    """
    slots = weight_slots(shape, weight)
    for g in gens:
        if any(shape.slot_weight(s) != weight for s in g.slots()):
            raise WeightError(f"Generator {g} is not of weight {weight}")
    rows = dvr_echelon([g.vector(slots) for g in gens])
    return [Element.from_vector(slots, r) for r in rows]


def element_rows(elements: Sequence[Element], slots: Sequence[Slot]) -> List[Row]:
    return [e.vector(slots) for e in elements]
