"""Procedure tests package."""
