"""Exact calculators for weighted Segre classes, marked stratification trees,
simplex moment integrals, and their seeded Monte-Carlo cross-checks."""

from .ring import GradedPoly, GradedRing
from .simplex import AffineForm, QuadraticSurd, SimplexSpec
from .strat import StratTree, tree_from_dict, tree_to_dict
from .mc import MCConfig

__all__ = [
    "AffineForm",
    "GradedPoly",
    "GradedRing",
    "MCConfig",
    "QuadraticSurd",
    "SimplexSpec",
    "StratTree",
    "tree_from_dict",
    "tree_to_dict",
]
