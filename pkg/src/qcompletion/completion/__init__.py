"""Deodhar localization and completed crystal lattices."""

from qcompletion.completion.deodhar import DeodharSymbol, deodhar_normalize, in_completion
from qcompletion.completion.lattices import (
    complete_lattice,
    complete_verma_lattice,
    sn_complete_lattice,
)
from qcompletion.completion.verify import (
    CompletionReport,
    is_complete_lattice,
    verify_lattice_completion,
)

__all__ = [
    "CompletionReport",
    "DeodharSymbol",
    "complete_lattice",
    "complete_verma_lattice",
    "deodhar_normalize",
    "in_completion",
    "is_complete_lattice",
    "sn_complete_lattice",
    "verify_lattice_completion",
]
