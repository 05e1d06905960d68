"""Cassinian and hyperbolic-type metrics on proper subdomains of R^n.

Distances (Cassinian, M-relative, distance ratio, hyperbolic,
quasihyperbolic), metric-ball tracing and convexity analysis, Mobius
distortion experiments and inclusion-radius verification, with a CLI for
reproducible runs. Hot kernels live in a compiled extension with a
pure-Python fallback; ``backend_name()`` reports which one is active.
"""

from ._backend import backend_name
from .analysis import (
    ConvexityConstantEstimate,
    ConvexityReport,
    InclusionReport,
    SANDWICH_THEOREMS,
    StarlikenessReport,
    THEOREMS,
    check_convexity_2d,
    explore_convexity_constant,
    explore_starlikeness,
    inclusion_radii,
    to_jsonable,
    verify_inclusion,
)
from .balls import (
    BallSpec,
    BallTrace,
    IntersectionCheckReport,
    contains,
    intersection_representation_check,
    trace_2d,
    write_trace_csv,
    write_traces_svg,
)
from .errors import (
    CapabilityError,
    MembershipError,
    ParameterRangeError,
    PoleError,
)
from .geometry import (
    Domain,
    HalfSpace,
    Point,
    PuncturedSpace,
    PuncturedUnitBall,
    SampledBoundary,
    UnitBall,
    as_point,
    boundary_minimize,
    sample_boundary,
)
from .metrics import (
    CASSINIAN,
    DISTANCE_RATIO,
    EUCLIDEAN,
    HYPERBOLIC,
    METRIC_BY_NAME,
    MetricKind,
    QUASIHYPERBOLIC,
    cassinian,
    distance_ratio,
    evaluate,
    hyperbolic,
    m_relative,
    m_relative_kind,
    min_boundary_product,
    quasihyperbolic,
    quasihyperbolic_exact,
)
from .moebius import (
    BilipschitzReport,
    DistortionReport,
    SphereInversion,
    apply,
    bilipschitz_distortion_check,
    canonical_inversion,
    distortion_experiment,
)
from .quasigrid import GridGraph, quasihyperbolic_grid

__version__ = "0.1.0"
