"""Exact computations for finite-dimensional algebra representations."""

from .algebra import (AlgebraPresentation, ChainModule, NCPoly, PairModule, Representation, compile_quiver,
                      direct_sum, direct_sum_many, free_algebra, validate_rep)
from .errors import BudgetExceeded, RepcompError
from .exactla import Matrix, det, det_sum, kernel_basis, rank, rref, solve_affine
from .field import GF, QQ, FieldSpec
from .kernels import BACKEND

__all__ = [
    "AlgebraPresentation", "BACKEND", "BudgetExceeded", "ChainModule", "FieldSpec", "GF", "Matrix", "NCPoly",
    "PairModule", "QQ", "RepcompError", "Representation", "compile_quiver", "det", "det_sum", "direct_sum",
    "direct_sum_many", "free_algebra", "kernel_basis", "rank", "rref", "solve_affine", "validate_rep",
]
