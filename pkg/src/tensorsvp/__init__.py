"""Exact integer lattice toolkit: HNF/LLL, exact SVP enumeration, tensor
products, binary codes and a tensored GapSVP reduction pipeline."""

from .errors import (
    FormatError,
    ParameterError,
    RankDeficientError,
    ResourceLimitError,
    SingularMatrixError,
    TensorSvpError,
)
from .lattice import Lattice, tensor, tensor_power
from .linalg import IntMatrix
from .svp import GapInstance, lambda1_exact, lambda1_lp, lll_reduce

__all__ = [
    "FormatError",
    "GapInstance",
    "IntMatrix",
    "Lattice",
    "ParameterError",
    "RankDeficientError",
    "ResourceLimitError",
    "SingularMatrixError",
    "TensorSvpError",
    "lambda1_exact",
    "lambda1_lp",
    "lll_reduce",
    "tensor",
    "tensor_power",
]
