"""Core configuration and error types."""

from qcompletion.core.config import AppConfig, LatticeConfig, OutputConfig, SuiteConfig
from qcompletion.core.errors import (
    ContainmentError,
    IsomorphismError,
    NonStandardLatticeError,
    ShapeError,
    TwistError,
    WeightError,
    WindowExceededError,
)

__all__ = [
    "AppConfig",
    "ContainmentError",
    "IsomorphismError",
    "LatticeConfig",
    "NonStandardLatticeError",
    "OutputConfig",
    "ShapeError",
    "SuiteConfig",
    "TwistError",
    "WeightError",
    "WindowExceededError",
]
