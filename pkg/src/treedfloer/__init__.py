"""Combinatorial and algebraic layer of stabilized Lagrangian Floer theory.

Exact-arithmetic tools for stable treed strips and disks, their
Behrend-Manin morphisms, labeled trajectory types, divisor-degree
arithmetic and the Floer coboundary over the Novikov field.
"""

from treedfloer.novikov import NovikovElement, q

__version__ = "0.1.0"
SCHEMA_VERSION = 1

__all__ = ["NovikovElement", "q", "SCHEMA_VERSION"]
