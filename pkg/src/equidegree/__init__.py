"""Executable combinatorics: zero-sum subsequences, prefix-bounded
rearrangement, and forcing repeated vertex degrees by bounded deletion."""

__version__ = "0.1.0"
