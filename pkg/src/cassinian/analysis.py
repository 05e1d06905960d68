"""Convexity checks, inclusion radii and conjecture exploration.

The inclusion radii implement the sandwich ``B_d(x, r) c B_c(x, t) c
B_d(x, R)`` for each companion metric d, with the radii depending only on
t and the boundary distance (or |x| inside the unit ball):

========================  ====================================================
theorem id                radii
========================  ====================================================
c_euclid                  r = t d^2/(1+t d),  R = t d^2/(1-t d)   (d = delta)
j_euclid                  r = (1-e^-t) d,     R = (e^t-1) d
c_j                       r = log(1 + t d/(1+t d)),  R = t d/(1-t d)
c_j_punctured             r = log(1+t d),     R = log(1/(1-t d))  (d = |x-a|)
c_rho                     r = log(1 + t d/(1+t d)),  R = 2 t d/(1-t d)
j_rho                     m = max(m1, m2),    M = log(1+(1+|x|)(e^r-1)/2)
c_rho_refined             r = log(1 + 2 t d/((1+|x|)(1+t d))), R = min(R1, R2)
k_c_punctured             r = log(1+t d), one-sided (no outer radius)
j_k                       m = log(2-e^-r),    M = log(1/(2-e^r))
c_k                       r = log(1 + t d/(1+t d)), R = log(1/(2-e^u)),
                          u = t d/(1-t d)
========================  ====================================================

``verify_inclusion`` samples the inner and middle metric spheres along
random directions and counts violations of the sandwich; for the sharp
punctured-space theorems it also evaluates the collinear extremal points
through the puncture and reports how far they sit from the predicted
radii. Conjectures (the half-plane convexity constant, starlikeness) get
exploration harnesses that report evidence, never a proof.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import metrics
from .balls import BallSpec, BallTrace, trace_2d, _first_crossing_generic
from ._codes import RAY_CROSSED
from .errors import CapabilityError, MembershipError, ParameterRangeError
from .geometry import (
    Domain,
    HalfSpace,
    PuncturedSpace,
    PuncturedUnitBall,
    SampledBoundary,
    UnitBall,
    _norm,
)

_LOG2 = math.log(2.0)


def to_jsonable(obj):
    """Recursively convert reports (dataclasses, arrays) to JSON-ready data."""
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: to_jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, np.ndarray):
        return [to_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, dict):
        return {k: to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    return obj


# ---------------------------------------------------------------------------
# Convexity


@dataclass
class ConvexityReport:
    """Polygon-based convexity verdict for a traced 2D metric ball.

    ``witness`` is only set when the ball is declared nonconvex: a triple
    (y1, y2, midpoint) with both endpoints on the traced boundary and the
    chord midpoint verified outside the ball by the metric itself.
    """

    convex: bool
    strictly_convex: bool
    starlike: bool
    witness: list | None
    max_cross_defect: float


def _normalized_crosses(poly: np.ndarray, circular: bool) -> np.ndarray:
    if len(poly) < 3:
        return np.empty(0)
    if circular:
        a = poly
        b = np.roll(poly, -1, axis=0)
        c = np.roll(poly, -2, axis=0)
    else:
        a, b, c = poly[:-2], poly[1:-1], poly[2:]
    e1 = b - a
    e2 = c - b
    cross = e1[:, 0] * e2[:, 1] - e1[:, 1] * e2[:, 0]
    den = np.linalg.norm(e1, axis=1) * np.linalg.norm(e2, axis=1)
    out = np.zeros_like(cross)
    ok = den > 0.0
    out[ok] = cross[ok] / den[ok]
    return out


def _witness_for(ball: BallSpec, poly: np.ndarray, circular: bool, pos: int):
    """Widen a flagged vertex into a verifiable chord whose midpoint the
    metric places outside the ball."""
    m = len(poly)
    best = None
    for k in (1, 2, 4, 8, 16, 32, 64):
        if circular:
            if 2 * k >= m:
                break
            i1, i2 = (pos - k) % m, (pos + k) % m
        else:
            i1, i2 = pos - k, pos + k
            if i1 < 0 or i2 >= m:
                break
        y1, y2 = poly[i1], poly[i2]
        mid = 0.5 * (y1 + y2)
        if not ball.domain.contains(mid):
            return [y1.tolist(), y2.tolist(), mid.tolist()]
        d = metrics.evaluate(ball.metric, ball.domain, ball.center, mid)
        if d > ball.radius:
            best = [y1.tolist(), y2.tolist(), mid.tolist()]
            if d > ball.radius * (1.0 + 1e-9) + 1e-12:
                return best
    return best


def check_convexity_2d(
    ball: BallSpec,
    rays: int = 512,
    cap: float | None = None,
    tol: float = 1e-9,
    trace: BallTrace | None = None,
) -> ConvexityReport:
    """Convexity / strict convexity / starlikeness of a traced 2D ball.

    Convexity is read off signed cross products of consecutive traced
    edges (normalized; tolerance ``tol``); any flagged concavity must be
    confirmed by a chord midpoint that the metric itself places outside
    the ball, otherwise it is dismissed as trace noise. Strict convexity
    additionally requires a complete trace (no unbounded or truncated
    rays) with every normalized cross above ``tol``.
    """
    if trace is None:
        trace = trace_2d(ball, rays=rays, cap=cap)
    complete = bool(trace.crossed.all())
    starlike = not trace.multi_crossing

    min_cross = math.inf
    witness = None
    for run in trace.runs():
        poly = trace.vertices[run]
        circular = complete
        crosses = _normalized_crosses(poly, circular)
        if crosses.size == 0:
            continue
        run_min = float(crosses.min())
        min_cross = min(min_cross, run_min)
        if witness is None and run_min < -tol:
            order = np.argsort(crosses)
            for idx in order[:32]:
                if crosses[idx] >= -tol:
                    break
                pos = (int(idx) + 1) % len(poly) if circular else int(idx) + 1
                witness = _witness_for(ball, poly, circular, pos)
                if witness is not None:
                    break

    if not math.isfinite(min_cross):
        min_cross = 0.0
    convex = witness is None
    strictly_convex = convex and complete and min_cross > tol
    return ConvexityReport(
        convex=convex,
        strictly_convex=strictly_convex,
        starlike=starlike,
        witness=witness,
        max_cross_defect=max(0.0, -min_cross),
    )


# ---------------------------------------------------------------------------
# Inclusion radii


def _require(cond: bool, constraint: str):
    if not cond:
        raise ParameterRangeError(f"parameter out of range: requires {constraint}")


def inclusion_radii(
    theorem: str, t: float, delta: float | None = None, abs_x: float | None = None
):
    """(inner, outer) radii for the named inclusion theorem.

    ``delta`` is the boundary distance of the center (equal to |x - a| in
    the punctured space); ``abs_x`` is |x| for the unit-ball theorems. The
    outer radius is None for the one-sided ``k_c_punctured``.
    """
    _require(t > 0.0, "t > 0")

    def need_delta() -> float:
        if delta is None or not delta > 0.0:
            raise ParameterRangeError(f"theorem {theorem!r} needs delta > 0")
        return float(delta)

    def need_abs_x() -> float:
        if abs_x is None or not 0.0 <= abs_x < 1.0:
            raise ParameterRangeError(f"theorem {theorem!r} needs 0 <= |x| < 1")
        return float(abs_x)

    if theorem == "c_euclid":
        d = need_delta()
        td = t * d
        _require(td < 1.0, "t * delta < 1")
        return td * d / (1.0 + td), td * d / (1.0 - td)
    if theorem == "j_euclid":
        d = need_delta()
        return (1.0 - math.exp(-t)) * d, math.expm1(t) * d
    if theorem == "c_j":
        d = need_delta()
        td = t * d
        _require(td < 1.0, "t * delta < 1")
        return math.log1p(td / (1.0 + td)), td / (1.0 - td)
    if theorem == "c_j_punctured":
        d = need_delta()
        td = t * d
        _require(td < 1.0, "t * |x - a| < 1")
        return math.log1p(td), -math.log1p(-td)
    if theorem == "c_rho":
        ax = need_abs_x()
        td = t * (1.0 - ax)
        _require(td < 1.0, "t * (1 - |x|) < 1")
        return math.log1p(td / (1.0 + td)), 2.0 * td / (1.0 - td)
    if theorem == "j_rho":
        ax = need_abs_x()
        m1 = math.log1p((1.0 + ax) * math.sinh(0.5 * t))
        m2 = math.log1p((1.0 - ax) * 0.5 * math.expm1(t))
        big = math.log1p((1.0 + ax) * 0.5 * math.expm1(t))
        return max(m1, m2), big
    if theorem == "c_rho_refined":
        ax = need_abs_x()
        td = t * (1.0 - ax)
        _require(td < 1.0, "t * (1 - |x|) < 1")
        u = td / (1.0 - td)
        r = math.log1p(2.0 * td / ((1.0 + ax) * (1.0 + td)))
        eu = math.expm1(u)
        r1 = 2.0 * math.asinh(eu / (1.0 + ax))
        r2 = math.log1p(2.0 * eu / (1.0 - ax))
        return r, min(r1, r2)
    if theorem == "k_c_punctured":
        d = need_delta()
        return math.log1p(t * d), None
    if theorem == "j_k":
        _require(t < _LOG2, "r < log 2")
        return math.log(2.0 - math.exp(-t)), -math.log(2.0 - math.exp(t))
    if theorem == "c_k":
        d = need_delta()
        _require(t < _LOG2 / (d * (1.0 + _LOG2)), "t < log2 / (delta (1 + log2))")
        td = t * d
        u = td / (1.0 - td)
        return math.log1p(td / (1.0 + td)), -math.log(2.0 - math.exp(u))
    raise ParameterRangeError(f"unknown inclusion theorem {theorem!r}")


THEOREMS = (
    "c_euclid",
    "j_euclid",
    "c_j",
    "c_j_punctured",
    "c_rho",
    "j_rho",
    "c_rho_refined",
    "k_c_punctured",
    "j_k",
    "c_k",
)

#: the fully two-sided sandwiches exercised by the acceptance suite
SANDWICH_THEOREMS = (
    "c_euclid",
    "j_euclid",
    "c_j",
    "c_j_punctured",
    "c_rho",
    "j_rho",
    "c_rho_refined",
    "c_k",
)

_ANY_DOMAIN = (PuncturedSpace, UnitBall, PuncturedUnitBall, HalfSpace, SampledBoundary)
_EXACT_K = (PuncturedSpace, HalfSpace)

# (inner metric, middle metric, outer metric, applicable domains, parameter)
_ROLES = {
    "c_euclid": ("euclid", "cassinian", "euclid", _ANY_DOMAIN, "delta"),
    "j_euclid": ("euclid", "j", "euclid", _ANY_DOMAIN, "delta"),
    "c_j": ("j", "cassinian", "j", _ANY_DOMAIN, "delta"),
    "c_j_punctured": ("j", "cassinian", "j", (PuncturedSpace,), "delta"),
    "c_rho": ("rho", "cassinian", "rho", (UnitBall,), "abs_x"),
    "j_rho": ("j", "rho", "j", (UnitBall,), "abs_x"),
    "c_rho_refined": ("rho", "cassinian", "rho", (UnitBall,), "abs_x"),
    "k_c_punctured": ("k", "cassinian", None, (PuncturedSpace,), "delta"),
    "j_k": ("j", "k", "j", _EXACT_K, "delta"),
    "c_k": ("k", "cassinian", "k", _EXACT_K, "delta"),
}


@dataclass
class InclusionReport:
    """Empirical verification record for one inclusion theorem."""

    theorem: str
    inner_radius: float
    outer_radius: float | None
    inner_violations: int
    outer_violations: int
    sharpness_gap_inner: float | None
    sharpness_gap_outer: float | None
    ratio_limit_samples: list
    samples: int
    slack: float


def _unit_vector(rng: np.random.Generator, n: int) -> np.ndarray:
    while True:
        v = rng.standard_normal(n)
        nv = _norm(v)
        if nv > 1e-12:
            return v / nv


def _sphere_point(
    domain: Domain,
    metric_name: str,
    x: np.ndarray,
    level: float,
    u: np.ndarray,
    delta: float,
):
    """A point y = x + rho*u with d(x, y) = level, by first-crossing bisection."""
    if metric_name == "euclid":
        return x + level * u
    dfun = metrics.evaluator(metrics.METRIC_BY_NAME[metric_name], domain)

    def d_along(rho):
        try:
            return dfun(x, x + rho * u)
        except MembershipError:
            return math.inf

    cap = min(1e3 * delta, domain.ray_exit(x, u))
    rho, _, status = _first_crossing_generic(
        d_along, level, cap, min(2.0 * delta, cap), 128, 1.06, 80, 1e-8
    )
    if status != RAY_CROSSED:
        return None
    return x + rho * u


def verify_inclusion(
    theorem: str,
    domain: Domain,
    x,
    t: float,
    samples: int = 1000,
    rng: np.random.Generator | None = None,
    slack: float = 1e-9,
    ratio_grid: Sequence[float] = (1e-1, 1e-2, 1e-3, 1e-4),
) -> InclusionReport:
    """Sample the inner and middle metric spheres and count sandwich
    violations; see the module docstring for the per-theorem radii."""
    if theorem not in _ROLES:
        raise ParameterRangeError(f"unknown inclusion theorem {theorem!r}")
    inner_m, mid_m, outer_m, domains, param = _ROLES[theorem]
    if not isinstance(domain, domains):
        raise CapabilityError(f"theorem {theorem!r} does not apply to {domain!r}")
    x = domain.require_member(x)
    if rng is None:
        rng = np.random.default_rng(0)

    delta = domain.boundary_distance(x)
    if param == "abs_x":
        abs_x = _norm(x)
        r, big_r = inclusion_radii(theorem, t, abs_x=abs_x)
        scale = 1.0 - abs_x
    else:
        abs_x = None
        r, big_r = inclusion_radii(theorem, t, delta=delta)
        scale = delta

    d_mid = metrics.evaluator(metrics.METRIC_BY_NAME[mid_m], domain)
    d_outer = (
        metrics.evaluator(metrics.METRIC_BY_NAME[outer_m], domain)
        if outer_m is not None
        else None
    )

    n = x.size
    inner_violations = 0
    for _ in range(samples):
        u = _unit_vector(rng, n)
        y = _sphere_point(domain, inner_m, x, r, u, delta)
        if y is None or d_mid(x, y) > t + slack:
            inner_violations += 1

    outer_violations = 0
    if d_outer is not None:
        # for the j_k chain the outer bound B_k(x, M) is stated for the
        # j-sphere of radius t, not for the middle k-sphere
        sample_m = "j" if theorem == "j_k" else mid_m
        bound_fun = (
            metrics.evaluator(metrics.METRIC_BY_NAME["k"], domain)
            if theorem == "j_k"
            else d_outer
        )
        for _ in range(samples):
            u = _unit_vector(rng, n)
            y = _sphere_point(domain, sample_m, x, t, u, delta)
            if y is None or bound_fun(x, y) > big_r + slack:
                outer_violations += 1

    gap_inner = gap_outer = None
    if theorem in ("c_euclid", "c_j_punctured") and isinstance(domain, PuncturedSpace):
        e = (domain.puncture - x) / delta
        td = t * delta
        y1 = x + (td * delta / (1.0 + td)) * e
        y2 = x - (td * delta / (1.0 - td)) * e
        d_in = metrics.evaluator(metrics.METRIC_BY_NAME[inner_m], domain)
        gap_inner = max(abs(d_in(x, y1) - r), abs(d_mid(x, y1) - t))
        gap_outer = max(abs(d_outer(x, y2) - big_r), abs(d_mid(x, y2) - t))

    ratios = []
    for g in ratio_grid:
        tg = g if theorem in ("j_rho", "j_k") else g / scale
        try:
            rg, big_rg = inclusion_radii(
                theorem, tg, delta=delta if param == "delta" else None,
                abs_x=abs_x,
            )
        except ParameterRangeError:
            continue
        if big_rg is not None and rg > 0.0:
            ratios.append([tg, big_rg / rg])

    return InclusionReport(
        theorem=theorem,
        inner_radius=r,
        outer_radius=big_r,
        inner_violations=inner_violations,
        outer_violations=outer_violations,
        sharpness_gap_inner=gap_inner,
        sharpness_gap_outer=gap_outer,
        ratio_limit_samples=ratios,
        samples=samples,
        slack=slack,
    )


# ---------------------------------------------------------------------------
# Conjecture explorers


@dataclass
class ConvexityConstantEstimate:
    """Largest radius multiplier keeping half-plane Cassinian balls convex."""

    constant: float
    per_center: list
    resolution: float
    rays: int
    bracket: list


def explore_convexity_constant(
    domain: HalfSpace | None = None,
    centers: Sequence | None = None,
    resolution: float = 1e-3,
    rays: int = 512,
    bracket: tuple[float, float] = (0.5, 1.0),
    cap_factor: float = 40.0,
) -> ConvexityConstantEstimate:
    """Binary-search the largest a with B_c(x, a / delta(x)) convex per center.

    The half-plane Cassinian metric scales as c(lambda x, lambda y) =
    c(x, y) / lambda, so the convexity threshold radius varies inversely
    with the boundary distance and the multiplier a = r * delta(x) is the
    scale-invariant quantity (the known nonconvex ball sits at radius
    exactly 1 / delta(x)). One center would therefore do; the default grid
    still sweeps offsets and heights as a sanity check. Returns the
    minimum over the grid.
    """
    if domain is None:
        domain = HalfSpace(2)
    if not isinstance(domain, HalfSpace) or domain.dim != 2:
        raise CapabilityError("the convexity-constant explorer runs on the half-plane")
    if resolution < 1e-9:
        raise ParameterRangeError("resolution too fine")
    if centers is None:
        centers = [
            (0.0, 0.25), (0.0, 0.5), (0.0, 1.0), (0.0, 2.0), (0.0, 4.0),
            (1.0, 1.0), (-1.0, 1.0), (3.0, 0.5), (-2.0, 2.0), (0.7, 1.5),
        ]

    def convex_at(center: np.ndarray, delta: float, a: float) -> bool:
        ball = BallSpec(domain, metrics.CASSINIAN, center, a / delta)
        rep = check_convexity_2d(ball, rays=rays, cap=cap_factor * delta)
        return rep.convex

    per_center = []
    lo0, hi0 = bracket
    for c in centers:
        center = domain.require_member(np.asarray(c, dtype=float))
        delta = domain.boundary_distance(center)
        lo, hi = lo0, hi0
        if convex_at(center, delta, hi):
            a = hi
        elif not convex_at(center, delta, lo):
            a = lo
        else:
            while hi - lo > resolution:
                mid = 0.5 * (lo + hi)
                if convex_at(center, delta, mid):
                    lo = mid
                else:
                    hi = mid
            a = lo
        per_center.append({"center": center.tolist(), "constant": a})
    return ConvexityConstantEstimate(
        constant=min(e["constant"] for e in per_center),
        per_center=per_center,
        resolution=resolution,
        rays=rays,
        bracket=[lo0, hi0],
    )


@dataclass
class StarlikenessReport:
    """Multi-crossing diagnostics over a radius grid (evidence only)."""

    center: list
    entries: list


def explore_starlikeness(
    domain: Domain,
    center,
    radii: Sequence[float],
    rays: int = 256,
    cap: float | None = None,
) -> StarlikenessReport:
    """Scan each traced ball for rays meeting it in more than one interval.

    A flagged ray is a starlikeness counterexample candidate for the ball;
    an empty report is evidence, not proof.
    """
    center = domain.require_member(center)
    entries = []
    for radius in radii:
        ball = BallSpec(domain, metrics.CASSINIAN, center, float(radius))
        trace = trace_2d(ball, rays=rays, cap=cap)
        entries.append(
            {
                "radius": float(radius),
                "starlike": not trace.multi_crossing,
                "multi_crossing_rays": trace.multi_crossing_rays.tolist(),
                "unbounded_rays": int(trace.unbounded_rays.size),
            }
        )
    return StarlikenessReport(center=center.tolist(), entries=entries)
