"""Exact lattice, Mukai vector and quadric-net computations for degree-8 K3 surfaces."""
from .exact_algebra import BinaryForm, Mat, Poly, binary_form_is_square, mat_inverse, parse_poly, poly_det
from .lattice import DivisorClass, IntegerLattice, QuadraticUnit, discriminant, pair
from .mukai import MukaiVector, mukai_pair, sigma_min, twist

__version__ = "0.1.0"

__all__ = [
    "BinaryForm",
    "DivisorClass",
    "IntegerLattice",
    "Mat",
    "MukaiVector",
    "Poly",
    "QuadraticUnit",
    "binary_form_is_square",
    "discriminant",
    "mat_inverse",
    "mukai_pair",
    "pair",
    "parse_poly",
    "poly_det",
    "sigma_min",
    "twist",
]
