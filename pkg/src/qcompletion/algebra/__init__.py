"""Exact arithmetic over Q(q) and the modules M(r), T(n) and V(n)."""

from qcompletion.algebra.actions import (
    Embedding,
    Kashiwara,
    act,
    act_casimir,
    act_delta,
    b_decompose,
    completion_module,
    divided_power,
    is_complete_module,
    kashiwara,
    ker_e,
    ker_e_prime,
)
from qcompletion.algebra.frames import BqFrame
from qcompletion.algebra.modules import (
    AlgebraGen,
    ComponentShape,
    Element,
    ModuleShape,
    Slot,
    format_shape,
    parse_shape,
    weight_slots,
)
from qcompletion.algebra.qarith import (
    ONE,
    ORD_INFINITY,
    Q,
    ZERO,
    QScalarReport,
    RatFunc,
    ord_q,
    q_binomial,
    q_factorial,
    q_int,
)

__all__ = [
    "ONE",
    "ORD_INFINITY",
    "Q",
    "ZERO",
    "AlgebraGen",
    "BqFrame",
    "ComponentShape",
    "Element",
    "Embedding",
    "Kashiwara",
    "ModuleShape",
    "QScalarReport",
    "RatFunc",
    "Slot",
    "act",
    "act_casimir",
    "act_delta",
    "b_decompose",
    "completion_module",
    "divided_power",
    "format_shape",
    "is_complete_module",
    "kashiwara",
    "ker_e",
    "ker_e_prime",
    "ord_q",
    "parse_shape",
    "q_binomial",
    "q_factorial",
    "q_int",
    "weight_slots",
]
