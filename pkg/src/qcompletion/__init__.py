"""Exact crystal bases and Enright completions for U_q(sl2)-modules.

This package models Verma modules, T-modules and finite-dimensional
modules over Q(q), their crystal lattices over the ring of functions
regular at q=0, and the completion of modules and lattices.
"""

__version__ = "0.1.0"
