"""Generalized break divisors, signatures, stability, Lawrence polytopes.

Top-level re-exports of the library surface; the submodules group the
machinery: exact rational linear algebra and LP (``exactlp``), graphs
and their trees, circuits and bonds (``graphs``), chip-firing and
divisor classes (``chipfiring``), fourientations and oriented bases
(``orientations``), circuit/cocircuit signatures and atlases
(``signatures``), break divisors and tree charges (``breakdiv``),
stability conditions and polarizations (``stability``), and Lawrence
polytope triangulations (``lawrence``).
"""

from .exactlp import (
    LpError,
    LpProblem,
    LpResult,
    determinant,
    smith_normal_form,
    solve_lp,
    solve_square,
)
from .graphs import (
    DEFAULT_BUDGET,
    EnumerationBudget,
    Graph,
    GraphError,
    SignedEdgeSet,
    SpanningTree,
)
from .chipfiring import (
    Divisor,
    PicardClass,
    linearly_equivalent,
    picard_class_count,
    reduce_divisor,
)
from .orientations import (
    BACKWARD,
    BIORIENTED,
    EXTERNAL,
    FORWARD,
    INTERNAL,
    UNORIENTED,
    Fourientation,
    OrientedBase,
    intersect,
    same_reversal_class,
)
from .signatures import (
    CIRCUIT,
    COCIRCUIT,
    Atlas,
    Signature,
    acyclicity_certificate,
    atlas_from_signature,
    bby_map,
    is_acyclic,
    is_triangulating_signature,
    reference_signature,
    signature_from_weights,
    signature_of_atlas,
)
from .breakdiv import (
    CertifyResult,
    RepresentativeSet,
    TreeCharge,
    all_break_divisors,
    break_divisor,
    certify_complete,
    charge_from_signature,
    external_orientations,
    generalized_break_divisors,
)
from .stability import (
    ClassicalityResult,
    Polarization,
    VStability,
    certify_classical,
    chamber_certificate,
    charge_from_vstability,
    cocycle_flip,
    flip_path,
    is_generic,
    phi_pcan,
    vstability_from_charge,
    vstability_from_polarization,
)
from .lawrence import (
    COGRAPHIC,
    GRAPHIC,
    LawrencePolytope,
    MatroidMatrix,
    SimplexSet,
    VerifyResult,
    atlas_of_simplexset,
    decode_simplex,
    dual_matrix,
    graphic_matrix,
    heights_for_signature_weights,
    is_totally_unimodular,
    regular_triangulation,
    simplex_of_base,
    triangulation_of_atlas,
    verify_triangulation,
)
from .fixtures import (
    kite,
    path_graph,
    seeded_heights,
    seeded_weights,
    theta,
    triangle,
)

__version__ = "0.1.0"

__all__ = [
    "Atlas",
    "BACKWARD",
    "BIORIENTED",
    "CIRCUIT",
    "COCIRCUIT",
    "COGRAPHIC",
    "CertifyResult",
    "ClassicalityResult",
    "DEFAULT_BUDGET",
    "Divisor",
    "EXTERNAL",
    "EnumerationBudget",
    "FORWARD",
    "Fourientation",
    "GRAPHIC",
    "Graph",
    "GraphError",
    "INTERNAL",
    "LawrencePolytope",
    "LpError",
    "LpProblem",
    "LpResult",
    "MatroidMatrix",
    "OrientedBase",
    "PicardClass",
    "Polarization",
    "RepresentativeSet",
    "Signature",
    "SignedEdgeSet",
    "SimplexSet",
    "SpanningTree",
    "TreeCharge",
    "UNORIENTED",
    "VStability",
    "VerifyResult",
    "acyclicity_certificate",
    "all_break_divisors",
    "atlas_from_signature",
    "atlas_of_simplexset",
    "bby_map",
    "break_divisor",
    "certify_classical",
    "certify_complete",
    "chamber_certificate",
    "charge_from_signature",
    "charge_from_vstability",
    "cocycle_flip",
    "decode_simplex",
    "determinant",
    "dual_matrix",
    "external_orientations",
    "flip_path",
    "generalized_break_divisors",
    "graphic_matrix",
    "heights_for_signature_weights",
    "intersect",
    "is_acyclic",
    "is_generic",
    "is_totally_unimodular",
    "is_triangulating_signature",
    "kite",
    "linearly_equivalent",
    "path_graph",
    "phi_pcan",
    "picard_class_count",
    "reduce_divisor",
    "reference_signature",
    "regular_triangulation",
    "same_reversal_class",
    "seeded_heights",
    "seeded_weights",
    "signature_from_weights",
    "signature_of_atlas",
    "simplex_of_base",
    "smith_normal_form",
    "solve_lp",
    "solve_square",
    "theta",
    "triangle",
    "triangulation_of_atlas",
    "verify_triangulation",
]
