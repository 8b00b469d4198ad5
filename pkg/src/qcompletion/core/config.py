"""Configuration classes for the library and CLI.

This module provides data classes for lattice windows, the randomized
verification suites and report output.
"""

from __future__ import annotations

import logging
import os
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import Any, Dict, Optional

import yaml

log = logging.getLogger(__name__)
log.addHandler(logging.NullHandler())


@dataclass(frozen=True)
class LatticeConfig:
    """Configuration for lattice windows.

    Attributes:
        window_floor: Smallest window used for any parameter.
        window_slope: Growth of the window with the module parameter n.
        window_offset: Constant added to slope * n.
        fixed_window: If set, used for every command instead of window_for().
    """

    window_floor: int = 25
    window_slope: int = 3
    window_offset: int = 10
    fixed_window: Optional[int] = None

    def window_for(self, n: int) -> int:
        """Default k-window for a construction with parameter n."""
        if self.fixed_window is not None:
            return self.fixed_window
        return max(self.window_floor, self.window_slope * abs(n) + self.window_offset)


@dataclass(frozen=True)
class SuiteConfig:
    """Configuration for the verification suites.

    Attributes:
        max_n: Largest n in the q-identity suite.
        random_elements: Number of randomized elements per relation check.
        lemma_max_p: Largest exponent p in the e'f^p check.
        twist_count: Number of random twists in the decomposition sweep.
        seed: Seed for numpy random generators.
        completion_max_n: Largest n in the completion sweeps.
        deodhar_max_n: Largest n in the Deodhar membership table.
    """

    max_n: int = 12
    random_elements: int = 100
    lemma_max_p: int = 8
    twist_count: int = 20
    seed: int = 20240607
    completion_max_n: int = 6
    deodhar_max_n: int = 8


@dataclass(frozen=True)
class OutputConfig:
    """Configuration for report output.

    Attributes:
        format: Default output format - "text", "json" or "dot".
        sort_keys: Whether JSON reports sort their keys.
    """

    format: str = "text"
    sort_keys: bool = False


@dataclass
class AppConfig:
    """Top-level configuration container.

    Attributes:
        lattice: Lattice window configuration.
        suite: Verification suite configuration.
        output: Report output configuration.
    """

    lattice: LatticeConfig = field(default_factory=LatticeConfig)
    suite: SuiteConfig = field(default_factory=SuiteConfig)
    output: OutputConfig = field(default_factory=OutputConfig)

    @classmethod
    def default(cls) -> "AppConfig":
        """Create a configuration with default values."""
        return cls(lattice=LatticeConfig(), suite=SuiteConfig(), output=OutputConfig())

    def to_yaml(self, path: Path) -> None:
        """Save configuration to a YAML file.

        Args:
            path: Path to the YAML file to write.
        """
        data = {
            "lattice": asdict(self.lattice),
            "suite": asdict(self.suite),
            "output": asdict(self.output),
        }

        with open(path, "w", encoding="utf-8") as f:
            yaml.safe_dump(data, f, default_flow_style=False, sort_keys=False)

    @classmethod
    def from_yaml(cls, path: Path) -> "AppConfig":
        """Load configuration from a YAML file.

        Args:
            path: Path to the YAML file to read.

        Returns:
            AppConfig loaded from the file.
        """
        with open(path, "r", encoding="utf-8") as f:
            data = yaml.safe_load(f) or {}

        return cls._from_dict(data)

    @classmethod
    def _from_dict(cls, data: Dict[str, Any]) -> "AppConfig":
        lattice_data = data.get("lattice", {})
        suite_data = data.get("suite", {})
        output_data = data.get("output", {})

        config = cls(
            lattice=LatticeConfig(**lattice_data) if lattice_data else LatticeConfig(),
            suite=SuiteConfig(**suite_data) if suite_data else SuiteConfig(),
            output=OutputConfig(**output_data) if output_data else OutputConfig(),
        )
        if config.output.format not in ("text", "json", "dot"):
            raise ValueError(f"Unknown output format: {config.output.format}")
        return config

    @classmethod
    def load_or_default(cls, path: Optional[Path] = None) -> "AppConfig":
        """Load configuration from file or return defaults.

        Also applies environment variable overrides.

        Args:
            path: Path to config file (optional).

        Returns:
            AppConfig loaded from file or with defaults.
        """
        if path is not None and path.exists():
            try:
                config = cls.from_yaml(path)
            except Exception as e:
                log.warning(f"Failed to load config from {path}: {e}")
                config = cls.default()
        else:
            config = cls.default()

        return cls._apply_env_overrides(config)

    @classmethod
    def _apply_env_overrides(cls, config: "AppConfig") -> "AppConfig":
        """Apply QCOMPLETION_WINDOW and QCOMPLETION_SEED overrides.

        Sections are frozen, so overridden sections are recreated.
        """
        window = os.environ.get("QCOMPLETION_WINDOW")
        if window:
            try:
                config.lattice = replace(config.lattice, fixed_window=int(window))
            except ValueError:
                log.warning(f"Ignoring non-integer QCOMPLETION_WINDOW={window!r}")

        seed = os.environ.get("QCOMPLETION_SEED")
        if seed:
            try:
                config.suite = replace(config.suite, seed=int(seed))
            except ValueError:
                log.warning(f"Ignoring non-integer QCOMPLETION_SEED={seed!r}")

        return config
