"""Tests for lattices and crystal bases."""
