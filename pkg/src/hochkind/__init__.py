"""Exact computer algebra for curved and dg algebras.

Maurer-Cartan twists, bar/cobar constructions, Koszul duality functors,
and Hochschild cochain complexes of the first and second kind, with
weight-resolved cohomology tables over Q or a prime field.
"""

__version__ = "0.1.0"
