"""Exact computations on quasi-filiform Lie algebras of nonzero rank."""
from .catalog import (
    FAMILIES,
    FamilySpec,
    SpecError,
    build_family,
    completability_report,
    completion,
    instances,
    naturally_graded,
    parse_spec,
    semidirect_sum,
    structure_table,
    torus_spec,
)
from .cohomology import Cochain2, classes_rank, cohomology_dim, cohomology_report, is_cocycle
from .deform import deformation_cocycle, gamma_coefficients, h2_bound_check
from .derivations import derivation_space, diagonal_derivation_space, inner_derivations, is_complete
from .liecore import LieAlgebra, associated_graded, center, jacobi_defect, lower_central_series, type_of

__all__ = [
    "FAMILIES", "FamilySpec", "SpecError", "build_family", "completability_report", "completion",
    "instances", "naturally_graded", "parse_spec", "semidirect_sum", "structure_table", "torus_spec",
    "Cochain2", "classes_rank", "cohomology_dim", "cohomology_report", "is_cocycle",
    "deformation_cocycle", "gamma_coefficients", "h2_bound_check",
    "derivation_space", "diagonal_derivation_space", "inner_derivations", "is_complete",
    "LieAlgebra", "associated_graded", "center", "jacobi_defect", "lower_central_series", "type_of",
]
