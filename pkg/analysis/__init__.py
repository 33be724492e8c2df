"""Diagnostics: neighbor-distance maps and expected gene exchange."""
