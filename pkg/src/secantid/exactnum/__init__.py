"""Exact scalars, jets, matrices and integer lattices."""

from .field import (
    DEFAULT_PRIMES, P61, P62, QQ, FieldMismatchError, FieldScalar, PrimeField, RationalField,
)
from .jets import ForbiddenPointError, Jet2, jet_eval
from .lattice import IntMatrix, smith_normal_form, smith_rank
from .matrix import (
    ExactMatrix, annihilator, bareiss_rank, intersect_dim, nullspace, rank, row_basis,
    row_spaces_equal, rref, span_intersection,
)
from .poly import PolyMap

__all__ = [
    "DEFAULT_PRIMES", "P61", "P62", "QQ", "FieldMismatchError", "FieldScalar", "PrimeField",
    "RationalField", "ForbiddenPointError", "Jet2", "jet_eval", "IntMatrix", "smith_normal_form",
    "smith_rank", "ExactMatrix", "annihilator", "bareiss_rank", "intersect_dim", "nullspace",
    "rank", "row_basis", "row_spaces_equal", "rref", "span_intersection", "PolyMap",
]
