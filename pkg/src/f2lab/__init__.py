"""Exact-arithmetic laboratory for multilinear forms and tensors over F2.

Bit-packed linear algebra, GF(2^k) with the trace map, dense tensors
and rank-one decompositions, exact (dyadic-rational) bias and
correlation, tensor-rank lower bounds from bias and from kernel/dual-
code certificates, and a reproducible verification harness over all of
it.
"""

from .bias import (BiasEstimate, DyadicRational, bias_bruteforce, bias_exact,
                   bias_mc, corr_class_max, corr_exact)
from .errors import CapacityError, FormatError
from .f2linalg import (BitMatrix, BitVec, Subspace, block_pivot_dims,
                       dual_space, echelonize, kernel, mat_rank, min_weight,
                       span_rank_histogram, subspace_contains)
from .gf2k import FieldElement, Gf2kField, gf_add, gf_mul, make_field, trace
from .numerics import (MaxProblemPoint, f_dk_bound, inequality_checks,
                       mrrw_constant, profile_max_check)
from .prng import Prng
from .rank import (RankBoundCertificate, RankDistribution, code_certificate,
                   corank_bound_margin, decompositions, matmul_bias_exact,
                   mrrw_rank_lb, rank_count, rank_exact, rank_lb_bias)
from .report import VerificationReport
from .tensors import (DenseTensor, Polynomial, RankDecomposition, RankOneTerm,
                      contract, evaluate, explicit_form_tensor, matmul_tensor,
                      random_rank_decomp, random_tensor, read_decomp,
                      read_poly, read_tensor, tensor_from_decomp,
                      trace_tensor, write_decomp, write_poly, write_tensor)

__version__ = "0.1.0"
