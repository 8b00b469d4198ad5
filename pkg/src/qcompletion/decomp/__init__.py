"""Twisted presentations and their standard decompositions."""

from qcompletion.decomp.decompose import (
    DecompositionCertificate,
    decompose,
    verify_certificate,
    verify_kernel_basis,
)
from qcompletion.decomp.twisted import TwistedPresentation, random_twist, validate_twist

__all__ = [
    "DecompositionCertificate",
    "TwistedPresentation",
    "decompose",
    "random_twist",
    "validate_twist",
    "verify_certificate",
    "verify_kernel_basis",
]
