"""Exact solver for linear vector optimisation via polyhedral cone projection."""

from .projection import ConeHRep, ConeSolution, polar_check, projected_hrep, solve_p, solve_p_star
from .vlp import (
    InfeasibleProblemError,
    VlpInstance,
    VlpValidationError,
    build_gh,
    lower_image_hrep,
    make_instance,
    normalize_c,
    transform_m,
    upper_image_hrep,
)
from .extract import (
    DualVlpSolution,
    NoSolutionCertificate,
    VlpSolution,
    extract_dual,
    extract_primal,
    pair_form,
    verify_infimizer,
    verify_maximizer,
    verify_minimizer,
    verify_supremizer,
)
from .duality import verify_geometric_duality
from .benson import solve_via_benson

__all__ = [
    "ConeHRep",
    "ConeSolution",
    "DualVlpSolution",
    "InfeasibleProblemError",
    "NoSolutionCertificate",
    "VlpInstance",
    "VlpSolution",
    "VlpValidationError",
    "build_gh",
    "extract_dual",
    "extract_primal",
    "lower_image_hrep",
    "make_instance",
    "normalize_c",
    "pair_form",
    "polar_check",
    "projected_hrep",
    "solve_p",
    "solve_p_star",
    "solve_via_benson",
    "transform_m",
    "upper_image_hrep",
    "verify_geometric_duality",
    "verify_infimizer",
    "verify_maximizer",
    "verify_minimizer",
    "verify_supremizer",
]
