"""mdsforge: exact verification toolkit for the cubic-moment multiple
Dirichlet series over rational function fields."""

__version__ = "0.1.0"
