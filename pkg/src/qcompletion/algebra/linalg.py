"""Dense exact linear algebra over Q(q).

Matrices are lists of rows of RatFunc. Elimination works in place on
copies; no routine mutates its arguments.
"""

from __future__ import annotations

import logging
from typing import List, Optional, Sequence, Tuple

from qcompletion.algebra.qarith import ZERO, RatFunc

log = logging.getLogger(__name__)
log.addHandler(logging.NullHandler())

Matrix = List[List[RatFunc]]
Vector = List[RatFunc]


def _copy(m: Sequence[Sequence[RatFunc]]) -> Matrix:
    return [list(row) for row in m]


def row_echelon(m: Matrix, t: Optional[Vector] = None) -> List[int]:
    """Bring m to row echelon form in place, applying the same row operations to t.

    Returns:
        The free (non-pivot) column indices.
    """
    free_vars: List[int] = []
    n_rows = len(m)
    if n_rows == 0:
        return free_vars
    n_cols = len(m[0])
    piv_r = 0
    for piv_c in range(n_cols):
        if piv_r == n_rows:
            free_vars.append(piv_c)
            continue
        for i_row in range(piv_r, n_rows):
            if m[i_row][piv_c]:
                break
        else:
            free_vars.append(piv_c)
            continue
        if i_row != piv_r:
            m[piv_r], m[i_row] = m[i_row], m[piv_r]
            if t is not None:
                t[piv_r], t[i_row] = t[i_row], t[piv_r]
        fp = m[piv_r][piv_c]
        for r in range(piv_r + 1, n_rows):
            fr = m[r][piv_c]
            if not fr:
                continue
            frp = fr / fp
            for c in range(piv_c, n_cols):
                if m[piv_r][c]:
                    m[r][c] = m[r][c] - m[piv_r][c] * frp
            if t is not None:
                t[r] = t[r] - t[piv_r] * frp
        piv_r += 1
    return free_vars


def back_substitute(
    m: Matrix, t: Optional[Vector], free_vars: Sequence[int], n_cols: int
) -> Optional[Vector]:
    """Solve an echelon system, setting free variables to zero.

    Returns:
        A solution vector, or None if the system is inconsistent.
    """
    n_rows = len(m)
    rank = n_cols - len(free_vars)
    if t is not None:
        for r in range(rank, n_rows):
            if t[r]:
                return None
    free = set(free_vars)
    piv_cols = [c for c in range(n_cols) if c not in free]
    sol: Vector = [ZERO] * n_cols
    for r in range(len(piv_cols) - 1, -1, -1):
        piv_c = piv_cols[r]
        s = ZERO if t is None else -t[r]
        for c in range(piv_c + 1, n_cols):
            if m[r][c] and sol[c]:
                s = s + m[r][c] * sol[c]
        sol[piv_c] = -s / m[r][piv_c]
    return sol


def rank(rows: Sequence[Sequence[RatFunc]]) -> int:
    if not rows:
        return 0
    m = _copy(rows)
    return len(m[0]) - len(row_echelon(m))


def solve(a: Sequence[Sequence[RatFunc]], b: Sequence[RatFunc]) -> Optional[Vector]:
    """One solution x of a x = b, or None."""
    n_cols = len(a[0]) if a else 0
    if not a:
        return [] if not any(b) else None
    m = _copy(a)
    t = list(b)
    free_vars = row_echelon(m, t)
    return back_substitute(m, t, free_vars, n_cols)


def nullspace(a: Sequence[Sequence[RatFunc]], n_cols: int) -> List[Vector]:
    """A basis of {x : a x = 0}, one vector per free column with that entry 1."""
    if not a:
        one = RatFunc.from_int(1)
        return [[one if i == j else ZERO for i in range(n_cols)] for j in range(n_cols)]
    m = _copy(a)
    free_vars = row_echelon(m)
    basis: List[Vector] = []
    piv_cols = [c for c in range(n_cols) if c not in set(free_vars)]
    for fv in free_vars:
        sol: Vector = [ZERO] * n_cols
        sol[fv] = RatFunc.from_int(1)
        for r in range(len(piv_cols) - 1, -1, -1):
            piv_c = piv_cols[r]
            s = ZERO
            for c in range(piv_c + 1, n_cols):
                if m[r][c] and sol[c]:
                    s = s + m[r][c] * sol[c]
            sol[piv_c] = -s / m[r][piv_c]
        basis.append(sol)
    return basis


def independent_subset(vectors: Sequence[Sequence[RatFunc]]) -> List[int]:
    """Indices of a maximal independent subset, chosen greedily in order."""
    chosen: List[int] = []
    current: Matrix = []
    for i, v in enumerate(vectors):
        trial = current + [list(v)]
        if rank(trial) == len(trial):
            current = trial
            chosen.append(i)
    return chosen


def transpose(m: Sequence[Sequence[RatFunc]], n_cols: int) -> Matrix:
    return [[row[c] for row in m] for c in range(n_cols)]


def columns_to_rows(columns: Sequence[Sequence[RatFunc]], n_rows: int) -> Tuple[Matrix, int]:
    """Matrix whose columns are the given vectors of length n_rows."""
    return [[col[r] for col in columns] for r in range(n_rows)], len(columns)
