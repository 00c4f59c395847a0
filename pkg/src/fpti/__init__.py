"""Frobenius roots, star-closures, parameter test ideals and HSL numbers over F_p[x_1..x_n]."""
from .errors import (
    BoundsExceeded,
    CtxMismatch,
    DuplicateVariable,
    ExponentOverflow,
    FptiError,
    InvalidVariable,
    InvariantViolation,
    IterationCap,
    NoTestElement,
    NotPrime,
    ParseError,
    RankMismatch,
    ResourceCap,
    StabilizationCapExceeded,
)
from .frobenius import bracket_power, fe_root, star_closure, star_closure_chain
from .fsing import (
    colon_killer_ideal,
    f_injective_locus,
    global_pti_cm,
    hsl_chain,
    hsl_global_bound,
    jacobian_test_element,
    pti_sandwich,
)
from .groebner import (
    GroebnerBasis,
    Limits,
    Submodule,
    ann_cokernel,
    buchberger,
    colon,
    ideal,
    intersect,
    krull_dim,
    membership,
    module_equal,
    normal_form,
    radical_membership,
    syzygy_matrix,
)
from .homology import (
    ExtFrobeniusData,
    ResolutionData,
    ext_presentation,
    free_resolution,
    induced_frobenius_matrix,
    non_cm_locus,
)
from .ringcore import ModuleVector, PolyMatrix, Polynomial, RingCtx, make_ring, monomial_compare

__version__ = "0.1.0"
