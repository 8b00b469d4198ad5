"""Lattices over A, crystal bases and their verification."""

from qcompletion.crystal.basis import (
    ConditionResult,
    CrystalBasis,
    GeneratorMap,
    VerificationReport,
    check_strong_isomorphism,
    standard_lattice,
    string_parameters,
    transport_basis,
    verify_crystal_basis,
    verify_crystal_lattice,
)
from qcompletion.crystal.dvr import dvr_reduce
from qcompletion.crystal.graph import CrystalGraph, crystal_graph, to_dot
from qcompletion.crystal.lattice import (
    Lattice,
    TailLaw,
    lattice_contains,
    lattice_equal,
    quotient_lattice,
)

__all__ = [
    "ConditionResult",
    "CrystalBasis",
    "CrystalGraph",
    "GeneratorMap",
    "Lattice",
    "TailLaw",
    "VerificationReport",
    "check_strong_isomorphism",
    "crystal_graph",
    "dvr_reduce",
    "lattice_contains",
    "lattice_equal",
    "quotient_lattice",
    "standard_lattice",
    "string_parameters",
    "to_dot",
    "transport_basis",
    "verify_crystal_basis",
    "verify_crystal_lattice",
]
