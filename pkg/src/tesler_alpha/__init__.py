"""Exact Berline-Vergne alpha values and Ehrhart data for projected Tesler polytopes."""

from .alpha import (
    AlphaValue,
    CaseTag,
    alpha_from_mdp,
    alpha_of_face,
    classify_case,
    closed_form_alpha,
    positivity_report,
    verify_tables,
)
from .cones import MDP, certify_total_unimodularity, fcone_mdp, fcone_mdp_oracle, ncone_mdp, oracle_report
from .ehrhart import count_points, ehrhart_poly, face_nvol, mcmullen_check, mcmullen_coefficient
from .errors import TeslerAlphaError
from .ratlinalg import RatMatrix, det, format_rational, mat_invert, parse_rational
from .tesler import (
    FaceSupport,
    HookSumVector,
    UTMatrix,
    VertexGraph,
    enumerate_faces,
    enumerate_vertices,
    facet_normal,
    psi_diag,
    verify_deformation,
)

__version__ = "0.1.0"

__all__ = [
    "AlphaValue", "CaseTag", "MDP", "RatMatrix", "FaceSupport", "HookSumVector", "UTMatrix", "VertexGraph",
    "TeslerAlphaError",
    "alpha_from_mdp", "alpha_of_face", "classify_case", "closed_form_alpha", "positivity_report", "verify_tables",
    "certify_total_unimodularity", "fcone_mdp", "fcone_mdp_oracle", "ncone_mdp", "oracle_report",
    "count_points", "ehrhart_poly", "face_nvol", "mcmullen_check", "mcmullen_coefficient",
    "det", "format_rational", "mat_invert", "parse_rational",
    "enumerate_faces", "enumerate_vertices", "facet_normal", "psi_diag", "verify_deformation",
]
