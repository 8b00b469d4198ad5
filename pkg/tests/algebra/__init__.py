"""Tests for exact arithmetic and module actions."""
