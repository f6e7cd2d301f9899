"""Frames, step-function reals over them, and pointwise suprema — an exact
symbolic toolkit with spatial oracles at desk scale."""

from .errors import (
    BoundaryNotTopBottom,
    EmptyDownset,
    FamilyOracleInvalid,
    ForeignElement,
    GridOverflow,
    HypothesisFailed,
    IsPointwise,
    NotAFrameMap,
    NotATruncateSequence,
    NotAnUpperBound,
    NotComplemented,
    NotConvex,
    NotRatherBelow,
    ParseError,
    PosetInvalid,
    StabilizationNotReached,
    ToolkitError,
    UnknownSuite,
    UnsupportedLift,
)
from .poset import Poset
from .frames import (
    FiniteFrame,
    FrameFlags,
    FrameMorphism,
    boolean_embedding,
    booleanize,
    build_frame,
    classify_frame,
    ensure_frame_map,
    is_complemented,
    morphism_check,
    open_quotient,
    powerset_frame,
    pseudocomplement,
    rather_below,
)
from .omega import OMEGA, POWERSET_OMEGA, OmegaElement, OmegaSet, cofin, fin
from .steps import (
    StepElement,
    arith,
    coz,
    constant,
    eval_open,
    identity_suite,
    leq_step,
    left_ray,
    map_step,
    negate,
    ray,
    scalar_mul,
    truncate,
    unit_component,
    validate_step,
)
from .lifting import (
    PL_ABS,
    PL_ADD,
    PL_JOIN,
    PL_MEET,
    PL_NEGATE,
    PL_POSITIVE,
    PL_SUB,
    lift,
    pl_affine,
    pl_max,
    pl_min,
    pl_scale,
)
from .families import (
    ExplicitFamily,
    PrefixIndicatorFamily,
    TruncateFamily,
    explicit,
    prefix_indicators,
    truncates,
)
from .pointwise import (
    DownsetSpec,
    PointwiseVerdict,
    TruncateSeq,
    characteristic,
    check_pointwise_inf,
    check_pointwise_sup,
    gap_characteristic,
    is_mobile,
    reconstruct,
    separating_morphism,
    translate_family,
    truncates_of,
    validate_truncate_seq,
)
from .spatial import (
    ECSeq,
    SupportSubgroup,
    hat,
    hat_seq,
    is_pointwise_closed,
    is_w_kernel,
    kernel_generated,
    madden_frame,
    oracle_sup_check,
    point_frame,
    unhat,
    unhat_seq,
)
