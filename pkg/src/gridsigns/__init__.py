"""Sign assignments and signed grid homology over the integers.

The pipeline: describe a toroidal grid (``GridDiagram``), pick a weak
equivalence class of sign assignments (``all_weak_classes``), solve for
a concrete assignment (``solve_signs`` with ``canonical_targets``),
build the signed chain complex and take exact integral homology
(``build_complex`` + ``homology_z``).  Everything downstream of the
grid is deterministic, so results are reproducible byte for byte.
"""

from .combinatorics import (
    GENERATOR_CAP,
    GradingVector,
    Perm,
    Rectangle,
    absolute_gradings,
    annulus_decomposition,
    connecting_domain,
    empty_rectangles_from,
    generators,
    hasse_covers,
    make_rectangle,
    maslov2_decompositions,
    rectangles_between,
    rectangles_from,
    relative_gradings,
)
from .errors import (
    BadIndex,
    DSquaredNonzero,
    GridError,
    GridMismatch,
    GridSyntaxError,
    IndexOutOfRange,
    Infeasible,
    NotAPermutation,
    ParityViolation,
    ProductNotOne,
    ProjectionViolation,
    SizeLimit,
    StructureViolation,
)
from .grid import (
    Domain,
    GridDiagram,
    LinkComponent,
    annulus_region,
    components,
    grid_sha,
    parse_grid,
    to_json,
    to_text,
)
from .homology import (
    HomologyGroup,
    HomologyTable,
    PoincarePolynomial,
    SignedComplex,
    build_complex,
    collapse_alexander,
    divide_q_factors,
    homology_f2,
    homology_z,
    poincare,
    smith_normal_form,
    table_to_dict,
    table_to_json,
)
from .signs import (
    HVProfile,
    SignAssignment,
    TwoCochain,
    VerifyReport,
    WeakClass,
    all_weak_classes,
    canonical_targets,
    component_signs,
    enumerate_sign_assignments,
    gauge_transform,
    gauge_witness,
    hv_profile,
    modify_by_cochain,
    phi,
    solve_signs,
    verify_sign_assignment,
    weak_align,
)

__version__ = "0.1.0"

__all__ = [
    "GENERATOR_CAP",
    "BadIndex",
    "DSquaredNonzero",
    "Domain",
    "GradingVector",
    "GridDiagram",
    "GridError",
    "GridMismatch",
    "GridSyntaxError",
    "HVProfile",
    "HomologyGroup",
    "HomologyTable",
    "IndexOutOfRange",
    "Infeasible",
    "LinkComponent",
    "NotAPermutation",
    "ParityViolation",
    "Perm",
    "PoincarePolynomial",
    "ProductNotOne",
    "ProjectionViolation",
    "Rectangle",
    "SignAssignment",
    "SignedComplex",
    "SizeLimit",
    "StructureViolation",
    "TwoCochain",
    "VerifyReport",
    "WeakClass",
    "absolute_gradings",
    "all_weak_classes",
    "annulus_decomposition",
    "annulus_region",
    "build_complex",
    "canonical_targets",
    "collapse_alexander",
    "component_signs",
    "components",
    "connecting_domain",
    "divide_q_factors",
    "empty_rectangles_from",
    "enumerate_sign_assignments",
    "gauge_transform",
    "gauge_witness",
    "generators",
    "grid_sha",
    "hasse_covers",
    "homology_f2",
    "homology_z",
    "hv_profile",
    "make_rectangle",
    "maslov2_decompositions",
    "modify_by_cochain",
    "parse_grid",
    "phi",
    "poincare",
    "rectangles_between",
    "rectangles_from",
    "relative_gradings",
    "smith_normal_form",
    "solve_signs",
    "table_to_dict",
    "table_to_json",
    "to_json",
    "to_text",
    "verify_sign_assignment",
    "weak_align",
]
