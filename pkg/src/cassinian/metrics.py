"""Hyperbolic-type metrics on proper subdomains of R^n.

Implements the Cassinian metric

    c_D(x, y) = sup over boundary points p of |x-y| / (|x-p||p-y|),

its M-relative generalization (denominator M(|x-p|, |p-y|); M = product
gives c_D back, M = sum gives the triangular-ratio metric), the distance
ratio metric j_D = log(1 + |x-y| / min(delta(x), delta(y))), the hyperbolic
metric of the unit ball and the half-space, and the quasihyperbolic metric
k_D. The supremum is evaluated as |x-y| divided by the infimum of the
denominator over the boundary; the infimum runs over finite boundary
points only, since the point at infinity of an unbounded boundary drives
the denominator to infinity and never witnesses the supremum.

Closed forms replace curve-infimum definitions where standard equivalents
exist: sinh^2(rho/2) = |x-y|^2 / ((1-|x|^2)(1-|y|^2)) on the unit ball,
cosh rho = 1 + |x-y|^2 / (2 x_n y_n) on the half-space (where k and rho
coincide), and k(x, y) = sqrt(theta^2 + log^2(|x-a|/|y-a|)) on the
punctured space with theta the angle at the puncture. On other domains the
quasihyperbolic metric falls back to a grid-graph shortest path and is
flagged approximate via :func:`quasihyperbolic_exact`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import geometry
from ._backend import kernels
from ._codes import (
    DOMAIN_HALF_PLANE,
    DOMAIN_PUNCTURED_DISK,
    DOMAIN_PUNCTURED_PLANE,
    DOMAIN_UNIT_DISK,
    METRIC_CASSINIAN,
    METRIC_DISTANCE_RATIO,
    METRIC_EUCLIDEAN,
    METRIC_HYPERBOLIC,
    METRIC_QUASIHYPERBOLIC,
)
from .errors import CapabilityError, ParameterRangeError
from .geometry import (
    Domain,
    HalfSpace,
    Point,
    PuncturedSpace,
    PuncturedUnitBall,
    SampledBoundary,
    UnitBall,
    _norm,
    _plane_basis,
)


@dataclass(frozen=True)
class MetricKind:
    """Selector over the supported metrics.

    ``m_func`` is only set for the M-relative family and must be a
    continuous symmetric positive function of two positive reals.
    """

    name: str
    m_func: Callable[[float, float], float] | None = None

    def __repr__(self):
        return f"MetricKind({self.name!r})"


CASSINIAN = MetricKind("cassinian")
DISTANCE_RATIO = MetricKind("j")
HYPERBOLIC = MetricKind("rho")
QUASIHYPERBOLIC = MetricKind("k")
EUCLIDEAN = MetricKind("euclid")

METRIC_BY_NAME = {
    "cassinian": CASSINIAN,
    "j": DISTANCE_RATIO,
    "rho": HYPERBOLIC,
    "k": QUASIHYPERBOLIC,
    "euclid": EUCLIDEAN,
}

_METRIC_CODES = {
    "cassinian": METRIC_CASSINIAN,
    "j": METRIC_DISTANCE_RATIO,
    "rho": METRIC_HYPERBOLIC,
    "k": METRIC_QUASIHYPERBOLIC,
    "euclid": METRIC_EUCLIDEAN,
}


def m_relative_kind(m_func: Callable[[float, float], float]) -> MetricKind:
    return MetricKind("m-relative", m_func)


def domain_code(domain: Domain):
    """(code, puncture) for domains the kernels understand, else None."""
    if isinstance(domain, PuncturedSpace) and domain.dim == 2:
        return DOMAIN_PUNCTURED_PLANE, domain.puncture
    if isinstance(domain, PuncturedUnitBall) and domain.dim == 2:
        return DOMAIN_PUNCTURED_DISK, domain.puncture
    if isinstance(domain, UnitBall):
        return DOMAIN_UNIT_DISK, np.zeros(2)
    if isinstance(domain, HalfSpace) and domain.dim == 2:
        return DOMAIN_HALF_PLANE, np.zeros(2)
    return None


def coded_pair(kind: MetricKind, domain: Domain):
    """Kernel (mcode, dcode, puncture) when the pair has a fast 2D path."""
    if kind.m_func is not None or kind.name not in _METRIC_CODES:
        return None
    dc = domain_code(domain)
    if dc is None:
        return None
    dcode, p = dc
    name = kind.name
    if name == "rho" and dcode not in (DOMAIN_UNIT_DISK, DOMAIN_HALF_PLANE):
        return None
    if name == "k" and dcode not in (DOMAIN_PUNCTURED_PLANE, DOMAIN_HALF_PLANE):
        return None
    return _METRIC_CODES[name], dcode, p


# ---------------------------------------------------------------------------
# Cassinian / M-relative


def min_boundary_product(domain: Domain, x, y) -> float:
    """inf over finite boundary points p of |x-p||p-y| (the c_D denominator)."""
    x = domain.require_member(x)
    y = domain.require_member(y)
    if tuple(y) < tuple(x):
        x, y = y, x
    if isinstance(domain, PuncturedSpace):
        a = domain.puncture
        return _norm(x - a) * _norm(y - a)
    if isinstance(domain, (UnitBall, PuncturedUnitBall)):
        e1, e2 = _plane_basis(x, y)
        v, _ = kernels.min_product_circle(
            float(x @ e1), float(x @ e2), float(y @ e1), float(y @ e2)
        )
        if isinstance(domain, PuncturedUnitBall):
            a = domain.puncture
            v = min(v, _norm(x - a) * _norm(y - a))
        return v
    if isinstance(domain, HalfSpace):
        fx, fy = x[:-1], y[:-1]
        v, _ = kernels.min_product_line(
            0.0, float(x[-1]), _norm(fy - fx), float(y[-1])
        )
        return v
    if isinstance(domain, SampledBoundary):
        return _polyline_min_product(domain, x, y)
    raise CapabilityError(f"no Cassinian evaluation for {domain!r}")


def _polyline_min_product(domain: SampledBoundary, x, y, coarse: int | None = None) -> float:
    """Vectorized scan + golden refinement of |x-p||p-y| along the polyline."""
    if coarse is None:
        coarse = max(512, 2 * len(domain.samples))
    ss = [np.linspace(0.0, domain.perimeter, coarse, endpoint=not domain.closed)]
    ss.append(domain._cumlen)
    for p in (x, y):
        base = domain.nearest_parameter(p)
        ss.append(
            np.asarray(
                geometry._anchor_ladder(base, domain._delta(p), domain.perimeter)
            )
        )
    params = np.concatenate(ss)
    params = np.unique(np.mod(params, domain.perimeter) if domain.closed else np.clip(params, 0.0, domain.perimeter))
    pts = domain.points_at(params)
    vals = np.linalg.norm(pts - x, axis=1) * np.linalg.norm(pts - y, axis=1)
    i = int(np.argmin(vals))
    if domain.closed:
        lo = params[i - 1] if i > 0 else params[-1] - domain.perimeter
        hi = params[i + 1] if i + 1 < len(params) else params[0] + domain.perimeter
    else:
        lo = params[max(i - 1, 0)]
        hi = params[min(i + 1, len(params) - 1)]
    best = float(vals[i])
    if hi > lo:
        def g(s):
            p = domain.point_at(s)
            return _norm(x - p) * _norm(p - y)

        _, refined = geometry._golden(g, lo, hi, geometry.GOLDEN_ITERS)
        best = min(best, refined)
    return best


def cassinian(domain: Domain, x, y) -> float:
    """Cassinian distance c_D(x, y)."""
    x = domain.require_member(x)
    y = domain.require_member(y)
    d = _norm(x - y)
    if d == 0.0:
        return 0.0
    den = min_boundary_product(domain, x, y)
    # a point this close to the boundary drives the supremum to infinity
    if den == 0.0:
        return math.inf
    return d / den


def m_relative(domain: Domain, m_func: Callable[[float, float], float], x, y) -> float:
    """M-relative distance: sup over boundary points of |x-y| / M(|x-p|, |p-y|)."""
    x = domain.require_member(x)
    y = domain.require_member(y)
    d = _norm(x - y)
    if d == 0.0:
        return 0.0
    _, v = geometry.boundary_minimize(
        domain, lambda p: float(m_func(_norm(x - p), _norm(p - y))), x, y
    )
    if v < 0.0:
        raise ParameterRangeError("M must be positive on (0, inf)^2")
    if v == 0.0:
        return math.inf
    return d / v


# ---------------------------------------------------------------------------
# Distance ratio, hyperbolic, quasihyperbolic


def distance_ratio(domain: Domain, x, y) -> float:
    """j_D(x, y) = log(1 + |x-y| / min(delta(x), delta(y)))."""
    x = domain.require_member(x)
    y = domain.require_member(y)
    d = _norm(x - y)
    if d == 0.0:
        return 0.0
    dmin = min(domain._delta(x), domain._delta(y))
    if dmin == 0.0:
        return math.inf
    return math.log1p(d / dmin)


def hyperbolic(domain: Domain, x, y) -> float:
    """Hyperbolic distance of the unit ball or the upper half-space."""
    x = domain.require_member(x)
    y = domain.require_member(y)
    d = _norm(x - y)
    if isinstance(domain, UnitBall):
        den = (1.0 - float(x @ x)) * (1.0 - float(y @ y))
        return 2.0 * math.asinh(d / math.sqrt(den))
    if isinstance(domain, HalfSpace):
        return math.acosh(1.0 + d * d / (2.0 * float(x[-1]) * float(y[-1])))
    raise CapabilityError("the hyperbolic metric needs the unit ball or a half-space")


def quasihyperbolic_exact(domain: Domain) -> bool:
    """True when k_D is evaluated by a closed form rather than a grid graph."""
    return isinstance(domain, (PuncturedSpace, HalfSpace))


def quasihyperbolic(domain: Domain, x, y, grid_spacing: float | None = None) -> float:
    """Quasihyperbolic distance k_D(x, y).

    Closed form on the punctured space and the half-space; other variants
    route to the planar grid-graph approximation (check
    :func:`quasihyperbolic_exact`).
    """
    x = domain.require_member(x)
    y = domain.require_member(y)
    if _norm(x - y) == 0.0:
        return 0.0
    if isinstance(domain, PuncturedSpace):
        vx = x - domain.puncture
        vy = y - domain.puncture
        rx, ry = _norm(vx), _norm(vy)
        cosang = float(vx @ vy) / (rx * ry)
        ang = math.acos(min(1.0, max(-1.0, cosang)))
        return math.hypot(ang, math.log(rx / ry))
    if isinstance(domain, HalfSpace):
        return hyperbolic(domain, x, y)
    from .quasigrid import quasihyperbolic_grid

    return quasihyperbolic_grid(domain, x, y, spacing=grid_spacing)


# ---------------------------------------------------------------------------
# Dispatch


def evaluate(kind: MetricKind, domain: Domain, x, y) -> float:
    """Evaluate the selected metric; raises CapabilityError on bad pairings."""
    if kind.name == "cassinian":
        return cassinian(domain, x, y)
    if kind.name == "j":
        return distance_ratio(domain, x, y)
    if kind.name == "rho":
        return hyperbolic(domain, x, y)
    if kind.name == "k":
        return quasihyperbolic(domain, x, y)
    if kind.name == "euclid":
        x = domain.require_member(x)
        y = domain.require_member(y)
        return _norm(x - y)
    if kind.name == "m-relative":
        return m_relative(domain, kind.m_func, x, y)
    raise CapabilityError(f"unknown metric kind {kind.name!r}")


def evaluator(kind: MetricKind, domain: Domain) -> Callable[[Point, Point], float]:
    """A two-point callable for repeated evaluation on one domain."""

    def d(x, y):
        return evaluate(kind, domain, x, y)

    return d
