"""
torickit: exact combinatorics of toric varieties.

Cones, fans, divisors and their polytopes are handled in exact integer
arithmetic; the moment map and its convexity checks use binary64.
"""

from .cone import (
    BinomialRelation,
    ChartSemigroup,
    Cone,
    HilbertBasis,
    binomial_relations,
    chart_semigroup,
    contains,
    dual_cone,
    faces,
    hilbert_basis,
    is_simplicial,
    is_smooth,
    is_strongly_convex,
)
from .divisor import (
    ClassGroup,
    DivisorPolytope,
    SupportFunction,
    TCartierData,
    TWeilDivisor,
    cartier_from_weil,
    class_group,
    div_of_character,
    divisor_polytope,
    euler_sections_identity,
    is_ample,
    is_basepoint_free,
    is_cartier,
    is_very_ample,
    positivity_report,
    psi_from_polytope,
    support_function,
)
from .errors import (
    DegenerateInputError,
    DimensionError,
    NotCartierError,
    OutOfSupportError,
    ParseError,
    ToricError,
    UnknownConeError,
    UnsupportedInputError,
)
from .fan import (
    Fan,
    LatticePolytope,
    OrbitRecord,
    ValidationReport,
    affine_space_fan,
    classify_smooth_surface,
    euler_characteristic,
    fundamental_group,
    hirzebruch_fan,
    hirzebruch_jung,
    is_complete,
    normal_fan,
    one_param_limit,
    orbit_table,
    product_fan,
    projective_space_fan,
    resolve_2d,
    star,
    subdivide_at,
    trivial_fan,
    validate,
    weighted_projective_fan,
)
from .lattice import AbelianGroup, QuotientLattice, hermite_normal_form, smith_normal_form
from .moment import (
    AlgebraicPoint,
    ContactClassification,
    MomentSample,
    TorusPoint,
    classify_contact,
    contact_index_check,
    convexity_report,
    distinguished_point,
    fan_isomorphic,
    legendre_map,
    moment_map,
    projective_retraction,
    projectivized_tangent_fan,
    sample_moment_image,
    torus_act,
    torus_embed,
)

__version__ = "0.1.0"
