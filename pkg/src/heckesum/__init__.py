"""Smoothed quadratic character sums over the Gaussian integers.

Subpackages follow the layers of the computation: exact ring arithmetic
(``gint``), residue symbols (``symbols``), quadratic Gauss sums
(``gauss_sum``), compactly supported weights and their transforms
(``smooth``), the character-sum evaluators (``charsum``), the double
Dirichlet series checks (``series``), and the command line front end
(``cli``).
"""

from . import charsum, gauss_sum, gint, series, smooth, symbols

__all__ = ["charsum", "gauss_sum", "gint", "series", "smooth", "symbols"]

__version__ = "0.1.0"
