"""Pytest fixtures for the full-scale acceptance runs.

These tests run the procedures with their default parameters and are
marked slow; deselect them with -m "not slow".
"""

from __future__ import annotations

import pytest


def pytest_collection_modifyitems(items):
    for item in items:
        if "e2e" in item.nodeid:
            item.add_marker(pytest.mark.slow)


@pytest.fixture(scope="module")
def acceptance_window() -> int:
    """Window of the two-route and completion-axiom runs."""
    return 25
