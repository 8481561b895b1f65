"""Taut and angle structures on ideal triangulations, in exact arithmetic."""

from __future__ import annotations

from .angle_solver import (
    AngleResult,
    AngleStatus,
    Certificate,
    TautStructure,
    build_system,
    enumerate_taut,
    is_taut,
    solve_angle,
    taut_transport_23,
    verify_certificate,
)
from .bundles import LayeredBundle, build_layered, monodromy_matrix
from .normal_q import NormalVector, canonical_basis, chi_angles, chi_star, matching_matrix
from .triangulation import (
    Perm4,
    Triangulation,
    TriangulationError,
    pachner_23,
    pachner_32,
    validate,
)

__all__ = [
    "AngleResult",
    "AngleStatus",
    "Certificate",
    "LayeredBundle",
    "NormalVector",
    "Perm4",
    "TautStructure",
    "Triangulation",
    "TriangulationError",
    "build_layered",
    "build_system",
    "canonical_basis",
    "chi_angles",
    "chi_star",
    "enumerate_taut",
    "is_taut",
    "matching_matrix",
    "monodromy_matrix",
    "pachner_23",
    "pachner_32",
    "solve_angle",
    "taut_transport_23",
    "validate",
    "verify_certificate",
]
