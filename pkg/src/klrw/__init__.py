"""Cylindrical flavored KLRW algebras: chambers, polynomial representation,
bimodules and annular tangle invariants."""

__version__ = "0.1.0"
