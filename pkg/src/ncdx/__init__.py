"""Exact construction and verification of matrix bispectral Darboux transformations."""

from ._scalar import BACKEND, Q
from .airy import (AiryContext, AiryOrbitSpec, AiryWave, airy_kernel_basis, b_map_airy,
                   darboux_airy, operator_from_kernel_airy, verify_airy)
from .errors import InputError, NcdxError, PreconditionError
from .exact import MPoly, RatFunc, as_ratfunc, derive
from .linalg import BlockMat, Mat, det, inverse, quasideterminant
from .matpoly import MatPolynomial, all_jordan_chains, char_det, companion, jordan_chains
from .ore import (ExpWave, OreOp, b_map_rank1, clear_denominators, op_apply_left,
                  op_apply_right, op_compose, op_normal_order, op_right_divide)
from .parse import parse_expr
from .rank1 import (KernelEntry, QuasiKernelSpec, darboux_rank1, operator_from_kernel_rank1,
                    verify_rank1)

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "Q", "AiryContext", "AiryOrbitSpec", "AiryWave", "airy_kernel_basis", "b_map_airy",
    "darboux_airy", "operator_from_kernel_airy", "verify_airy", "InputError", "NcdxError",
    "PreconditionError", "MPoly", "RatFunc", "as_ratfunc", "derive", "BlockMat", "Mat", "det",
    "inverse", "quasideterminant", "MatPolynomial", "all_jordan_chains", "char_det", "companion",
    "jordan_chains", "ExpWave", "OreOp", "b_map_rank1", "clear_denominators", "op_apply_left",
    "op_apply_right", "op_compose", "op_normal_order", "op_right_divide", "parse_expr",
    "KernelEntry", "QuasiKernelSpec", "darboux_rank1", "operator_from_kernel_rank1", "verify_rank1",
]
