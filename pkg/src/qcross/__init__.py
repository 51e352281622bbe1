"""Verification workbench for cross-product *-algebras of quantum groups."""
__version__ = "0.1.0"
