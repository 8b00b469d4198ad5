"""Exception types raised by the library.

All of them are ValueError subclasses so callers that only care about
bad input can catch ValueError.
"""

from __future__ import annotations


class ShapeError(ValueError):
    """A slot, component or shape does not fit the module it is used with."""


class WeightError(ValueError):
    """Vectors that must share one weight do not."""


class WindowExceededError(ValueError):
    """A lattice query reaches past the lattice window."""


class NonStandardLatticeError(ValueError):
    """A construction that needs a standard crystal basis got another one."""


class IsomorphismError(ValueError):
    """Transport data is not a B_q-isomorphism."""


class ContainmentError(ValueError):
    """A sublattice is not contained in the lattice it is divided out of."""


class TwistError(ValueError):
    """A twisted presentation is not a valid object of the category."""

    def __init__(self, condition: str, detail: str = ""):
        self.condition = condition
        message = f"twisted presentation fails {condition}"
        if detail:
            message = f"{message}: {detail}"
        super().__init__(message)
