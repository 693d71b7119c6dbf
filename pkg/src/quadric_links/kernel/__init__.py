"""Exact arithmetic kernel: rationals, linear algebra, Smith form, hull LP."""
from .hull import HullCertificate, solve_standard_lp, zero_in_convex_hull
from .linalg import determinant, matmul, nullspace_basis, rank, rref, solve_unique, transpose
from .rational import as_rational, as_vector, format_rational, format_vector
from .smith import SmithForm, smith_normal_form
from .accel import BACKEND, FaceTable, cells_homology

__all__ = [
    "HullCertificate",
    "zero_in_convex_hull",
    "solve_standard_lp",
    "determinant",
    "matmul",
    "nullspace_basis",
    "rank",
    "rref",
    "solve_unique",
    "transpose",
    "as_rational",
    "as_vector",
    "format_rational",
    "format_vector",
    "SmithForm",
    "smith_normal_form",
    "BACKEND",
    "cells_homology",
    "FaceTable",
]
