"""Simplicial cell decompositions of (S^2)^n, CP^n and RP^n."""

from .complex_core import (
    FREE,
    Certificate,
    FacePoset,
    GluedComplex,
    build_face_poset,
    dumps_gcx,
    euler_characteristic,
    f_vector,
    from_coloured_arcs,
    from_facet_list,
    is_closed_pseudomanifold,
    is_simplicial_cell,
    is_simplicial_complex,
    link_of_face,
    loads_gcx,
)
from .derived import derived_f_vector, derived_subdivision, surjection_count
from .errors import (
    CapacityExceeded,
    ConstructionInconsistency,
    CpnCellsError,
    Disconnected,
    FaceNotFound,
    IllDefinedGluing,
    InvalidFacet,
    InvolutionViolation,
    MatchingViolation,
    NotGood,
    NotGraded,
    NotIdentityGlued,
    ParseError,
)
from .gem_io import (
    ColouredGraph,
    GraphAutomorphismData,
    canonical_code,
    complex_to_gem,
    export_gem,
    find_isomorphism,
    gem_to_complex,
    import_gem,
    verify_automorphism,
)
from .homology import HomologyResult, chain_complex, homology, smith_normal_form
from .quotient import QuotientComplex, cpn_complex, cross_polytope_boundary, quotient_complex, rpn_complex
from .staircase import MonotonePath, SphereProduct, enumerate_monotone_paths, sphere_product
from .sym_action import OrbitTable, check_good_action, check_good_action_cellwise, orbits, perm_on_facet

__version__ = "0.1.0"
