"""PyMeasure procedures running the verification sweeps."""

from qcompletion.procedures.completion import CompletionSweepProcedure
from qcompletion.procedures.decomposition import DecompositionSweepProcedure
from qcompletion.procedures.identities import QIdentityProcedure

__all__ = [
    "QIdentityProcedure",
    "CompletionSweepProcedure",
    "DecompositionSweepProcedure",
]
