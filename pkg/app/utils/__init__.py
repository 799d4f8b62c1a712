"""Utility functions."""
from app.utils.shuffle import seeded_permutation
from app.utils.text_utils import format_decimal, format_percent

__all__ = ["format_decimal", "format_percent", "seeded_permutation"]
