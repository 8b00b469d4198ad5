"""Tests for twisted presentations and decompositions."""
