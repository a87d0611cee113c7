from .matrix import NoSolution, RatMatrix, bareiss_rank, kernel_basis, rank, rref, solve
from .modular import certified_nullspace, certified_rref, rank_mod_p, single
from .rational import Rational, rat, rat_str
from .tensor import QArray, concatenate, einsum, integer_rows, stack

__all__ = [
    "NoSolution", "QArray", "RatMatrix", "Rational", "bareiss_rank", "certified_nullspace",
    "certified_rref", "concatenate", "einsum", "integer_rows", "kernel_basis", "rank",
    "rank_mod_p", "rat", "rat_str", "rref", "single", "solve", "stack",
]
