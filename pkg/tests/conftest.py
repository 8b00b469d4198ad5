"""Pytest fixtures for qcompletion tests.

This module provides shared fixtures for module shapes, lattice windows,
configuration files and procedure event capture.
"""

from __future__ import annotations

from typing import Any, Callable

import pytest

# =============================================================================
# Shapes and Windows
# =============================================================================


@pytest.fixture
def shape_of() -> Callable:
    """Fixture that returns parse_shape for building shapes from text."""
    from qcompletion.algebra.modules import parse_shape

    return parse_shape


@pytest.fixture
def small_window() -> int:
    """A window large enough for the structure of n <= 3 and fast to verify."""
    return 8


# =============================================================================
# Configuration Fixtures
# =============================================================================


@pytest.fixture
def clean_env(monkeypatch):
    """Remove environment overrides so tests see the defaults."""
    for name in ("QCOMPLETION_WINDOW", "QCOMPLETION_SEED", "QCOMPLETION_DEBUG"):
        monkeypatch.delenv(name, raising=False)
    return monkeypatch


@pytest.fixture
def config_file(tmp_path):
    """Write a small YAML configuration and return its path."""
    path = tmp_path / "config.yaml"
    path.write_text(
        "lattice:\n"
        "  window_floor: 6\n"
        "  window_slope: 1\n"
        "  window_offset: 4\n"
        "suite:\n"
        "  max_n: 4\n"
        "  random_elements: 5\n"
        "  lemma_max_p: 3\n"
        "  twist_count: 2\n"
        "  seed: 7\n"
        "  completion_max_n: 1\n"
        "  deodhar_max_n: 2\n"
        "output:\n"
        "  format: json\n"
        "  sort_keys: true\n",
        encoding="utf-8",
    )
    return path


# =============================================================================
# Procedure Testing Fixtures
# =============================================================================


class EventCapture:
    """Capture events emitted by procedures."""

    def __init__(self):
        self.results: list[dict[str, Any]] = []
        self.progress: list[float] = []

    def emit(self, name: str, data: Any) -> None:
        if name == "results":
            self.results.append(data)
        elif name == "progress":
            self.progress.append(data)

    @property
    def all_passed(self) -> bool:
        """Whether every results row passed."""
        return all(r["Passed"] for r in self.results)

    def failing(self, column: str) -> list[Any]:
        """Values of column in the rows that did not pass."""
        return [r[column] for r in self.results if not r["Passed"]]

    def clear(self) -> None:
        self.results.clear()
        self.progress.clear()


@pytest.fixture
def event_capture():
    """Create an EventCapture instance for capturing procedure events."""
    return EventCapture()


@pytest.fixture
def run_procedure(event_capture):
    """Run a procedure with emit routed to event_capture."""

    def run(proc):
        proc.emit = event_capture.emit
        proc.should_stop = lambda: False
        proc.startup()
        proc.execute()
        proc.shutdown()
        return event_capture

    return run
