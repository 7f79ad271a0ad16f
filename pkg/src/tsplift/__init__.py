"""Exact rational toolkit for lifted approximations of the TSP polytope and their scaling."""

from .combinatorics import Cycle, Partition, PathSubset, canonicalize, enumerate_cycles, num_cycles
from .config import dense_cap, get_dense_cap, set_dense_cap
from .errors import (
    MalformedProgramError,
    PreconditionError,
    ResourceCapError,
    SmoothingInfeasibleError,
    TspliftError,
    UnboundedRayError,
)
from .facets import FacetCertificate, facet_f_ij, facet_f_ij_prime, facet_h_U, verify_facet
from .funcspace import CycleFunction, SymMatrix, g_gamma, g_st, linear_extension
from .lifting import SmoothingMap, apply_T_pi, build_smoothing, eval_T_pi_gst
from .lp import LinearProgram, LPResult, check_certificate, solve_lp
from .membership import qk_membership, qk_ray_max, scaling_check, tsp_membership

__version__ = "0.1.0"

__all__ = [
    "Cycle",
    "CycleFunction",
    "FacetCertificate",
    "LPResult",
    "LinearProgram",
    "MalformedProgramError",
    "Partition",
    "PathSubset",
    "PreconditionError",
    "ResourceCapError",
    "SmoothingInfeasibleError",
    "SmoothingMap",
    "SymMatrix",
    "TspliftError",
    "UnboundedRayError",
    "apply_T_pi",
    "build_smoothing",
    "canonicalize",
    "check_certificate",
    "dense_cap",
    "enumerate_cycles",
    "eval_T_pi_gst",
    "facet_f_ij",
    "facet_f_ij_prime",
    "facet_h_U",
    "g_gamma",
    "g_st",
    "get_dense_cap",
    "linear_extension",
    "num_cycles",
    "qk_membership",
    "qk_ray_max",
    "scaling_check",
    "set_dense_cap",
    "solve_lp",
    "tsp_membership",
    "verify_facet",
]
