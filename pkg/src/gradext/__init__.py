"""Exact computations for group-graded finite-dimensional algebras over F_p."""

from .algebra import Algebra, Bimodule, GradedAlgebra, GradeGroup
from .modules import Module, Morphism

__version__ = "0.1.0"

__all__ = ["Algebra", "Bimodule", "GradedAlgebra", "GradeGroup", "Module", "Morphism", "__version__"]
