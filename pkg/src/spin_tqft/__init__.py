"""Two-dimensional state sum models on triangulated oriented surfaces.

The package builds models from algebra data (triangle amplitudes C, edge
pairing B, vertex weight R), checks every axiom by direct tensor
contraction, evaluates partition functions over triangulations and diagram
programs, handles spin structures through quadratic forms, and enumerates
the crossings of small commutative algebras.
"""

from .algebra import (
    DEFAULT_TOL, AlgebraData, Bicharacter, Grading, ValidationReport,
    algebra_from_json_dict, algebra_to_json_dict, build_algebra, element_power,
    frobenius_form, multiply, nakayama, transform_basis, validate,
)
from .constructors import (
    Quaternion, all_klein_bicharacters, basis_matrices, direct_sum,
    gamma_bicharacter, gamma_model, grading_residual, group_algebra_cyclic,
    klein_bicharacter, klein_quaternionic_model, matrix_algebra,
    standard_gradings, trivial_bicharacter, z2_complex_model, z2_matrix_model,
    z2_sign_bicharacter,
)
from .crossings import (
    AxiomReport, CrossingMap, canonical_crossing, check_axioms,
    check_graded_conditions, crossing_from_bicharacter, crossing_from_json_dict,
    crossing_to_json_dict, curl_map, transform_crossing,
)
from .surfaces import (
    SpinStructure, Triangulation, arf_invariant, enumerate_spin_structures,
    euler_characteristic, handle_word, make_triangulation, pachner_13,
    pachner_22, parity, polygon_triangulation, random_pachner_moves,
    sphere_two_triangle, spin_structure, torus_two_triangle, triangle_single,
    triangulation_from_json_dict, triangulation_to_json_dict,
)
from .evaluator import (
    Diagram, chi, eta, eval_diagram, fhk_partition, handle_element,
    naive_partition, ring_maps, sphere_partition, spin_partition,
    spin_partition_direct,
)
from .solver import (
    ClassifiedCrossing, SolveOptions, SolveResult, classify_solution,
    enumerate_bicharacters, idempotent_basis, solve_crossings,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
