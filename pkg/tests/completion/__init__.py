"""Tests for completions."""
