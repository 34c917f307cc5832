"""Exact continued-fraction toolkit for Laurent series over prime fields."""

from .gfpoly import FieldSpec, Poly
from .laurent import LaurentSeries, RationalFunction

__version__ = "0.1.0"

__all__ = ["FieldSpec", "Poly", "LaurentSeries", "RationalFunction", "__version__"]
