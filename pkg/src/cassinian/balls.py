"""Metric balls: membership, 2D boundary tracing and file export.

A ball ``B_d(x, R) = {z in D : d(x, z) < R}`` is traced by shooting rays
from the center and bisecting the first level crossing of d along each
ray. Rays that never reach the level within the cap radius are recorded as
unbounded; rays where the metric jumps past the level (a domain exit, e.g.
a Euclidean ball capped by the domain) are recorded as truncated. A scan
beyond the first crossing flags rays where the ball continues past its
boundary, which is the starlikeness diagnostic used by the conjecture
explorer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from . import metrics
from ._backend import kernels
from ._codes import RAY_CROSSED, RAY_NO_CROSSING, RAY_TRUNCATED
from .errors import CapabilityError, MembershipError, ParameterRangeError
from .geometry import Domain, Point, _norm
from .metrics import MetricKind, coded_pair

TRACE_TOL = 1e-8
BISECT_STEPS = 80
CAP_FACTOR = 1e3
LIN_STEPS = 128
GROWTH = 1.06
MULTI_SCAN_POINTS = 256


@dataclass
class BallSpec:
    """A metric ball: domain, metric, center and radius."""

    domain: Domain
    metric: MetricKind
    center: Point
    radius: float

    def __post_init__(self):
        self.center = self.domain.require_member(self.center)
        if not (self.radius > 0.0 and math.isfinite(self.radius)):
            raise ParameterRangeError("ball radius must be positive and finite")


def contains(ball: BallSpec, y) -> bool:
    """Strict membership d(center, y) < radius; y must lie in the domain."""
    return metrics.evaluate(ball.metric, ball.domain, ball.center, y) < ball.radius


@dataclass
class BallTrace:
    """Polyline approximation of a 2D metric circle, one vertex per ray.

    ``vertices`` and ``residuals`` carry NaN rows for rays without a
    crossing; those rays appear in ``unbounded_rays`` (no crossing up to
    the cap) or ``truncated_rays`` (the metric jumped past the level at a
    domain exit). ``multi_crossing_rays`` lists rays where the metric dips
    back below the level beyond the traced crossing.
    """

    thetas: np.ndarray
    vertices: np.ndarray
    residuals: np.ndarray
    unbounded_rays: np.ndarray
    truncated_rays: np.ndarray
    multi_crossing_rays: np.ndarray
    radius: float
    cap: float

    @property
    def crossed(self) -> np.ndarray:
        return ~np.isnan(self.residuals)

    @property
    def multi_crossing(self) -> bool:
        return self.multi_crossing_rays.size > 0

    def polygon(self) -> np.ndarray:
        """Finite vertices in increasing ray-angle order."""
        return self.vertices[self.crossed]

    def runs(self) -> list[np.ndarray]:
        """Indices of consecutive crossed rays, split at gaps.

        With no gaps a single circular run is returned (the polygon closes
        up); otherwise each run is an open arc of the traced boundary.
        """
        ok = self.crossed
        n = ok.size
        if ok.all():
            return [np.arange(n)]
        idx = np.flatnonzero(ok)
        if idx.size == 0:
            return []
        breaks = np.flatnonzero(np.diff(idx) > 1)
        runs = np.split(idx, breaks + 1)
        # the scan is circular: merge the first and last run across 0
        if len(runs) > 1 and idx[0] == 0 and idx[-1] == n - 1:
            runs[0] = np.concatenate([runs[-1], runs[0]])
            runs.pop()
        return runs


def _first_crossing_generic(
    d_along: Callable[[float], float],
    level: float,
    cap: float,
    lin_span: float,
    lin_steps: int,
    growth: float,
    bisect_steps: int,
    trace_tol: float,
):
    prev = 0.0
    rho = 0.0
    h = lin_span / lin_steps
    crossed = False
    i = 0
    while True:
        i += 1
        rho = i * h if i <= lin_steps else rho * growth
        if rho > cap:
            rho = cap
        v = d_along(rho)
        if v >= level:
            crossed = True
            break
        prev = rho
        if rho >= cap:
            break
    if not crossed:
        return cap, math.nan, RAY_NO_CROSSING
    lo, hi = prev, rho
    for _ in range(bisect_steps):
        mid = 0.5 * (lo + hi)
        if d_along(mid) >= level:
            hi = mid
        else:
            lo = mid
    v = d_along(hi)
    resid = abs(v - level)
    if not math.isfinite(v) or resid > trace_tol:
        return hi, resid, RAY_TRUNCATED
    return hi, resid, RAY_CROSSED


def _dips_below_generic(d_along, level, rho_star, cap, npts) -> bool:
    if cap <= rho_star:
        return False
    step = (cap - rho_star) / npts
    for i in range(1, npts + 1):
        if d_along(rho_star + i * step) < level - 1e-12:
            return True
    return False


def trace_2d(
    ball: BallSpec,
    rays: int = 512,
    cap: float | None = None,
    multi_scan: bool = True,
    trace_tol: float = TRACE_TOL,
    bisect_steps: int = BISECT_STEPS,
) -> BallTrace:
    """Trace the metric circle d(center, .) = radius in the plane.

    Shoots ``rays`` equally spaced directions from the center, finds the
    first level crossing along each by a linear-then-geometric bracketing
    scan up to ``cap`` (default 1000 boundary distances) followed by
    bisection, and optionally scans past each crossing for dips back below
    the level.
    """
    domain = ball.domain
    center = ball.center
    if center.size != 2:
        raise CapabilityError("ball tracing is 2D only")
    if rays < 16:
        raise ParameterRangeError("tracing needs at least 16 rays")
    delta = domain.boundary_distance(center)
    if cap is None:
        cap = CAP_FACTOR * delta
    lin_span = min(cap, 2.0 * delta)
    level = ball.radius

    pair = coded_pair(ball.metric, domain)
    if pair is None and ball.metric.name == "k" and not metrics.quasihyperbolic_exact(domain):
        raise CapabilityError(
            "quasihyperbolic tracing needs a closed form (punctured space or half-space);"
            " the grid-graph value is too coarse for the trace tolerance"
        )
    if pair is not None:
        mcode, dcode, p = pair
        p0, p1 = float(p[0]), float(p[1])
        cx, cy = float(center[0]), float(center[1])

        def crossing(ux, uy):
            return kernels.ray_first_crossing(
                mcode, dcode, p0, p1, cx, cy, ux, uy, level, cap,
                lin_span, LIN_STEPS, GROWTH, bisect_steps, trace_tol,
            )

        def dips(ux, uy, rho_star):
            return kernels.dips_below_after(
                mcode, dcode, p0, p1, cx, cy, ux, uy, level, rho_star, cap,
                MULTI_SCAN_POINTS,
            )

    else:
        dfun = metrics.evaluator(ball.metric, domain)

        def d_along_factory(u):
            def d_along(rho):
                try:
                    return dfun(center, center + rho * u)
                except MembershipError:
                    return math.inf

            return d_along

        def crossing(ux, uy):
            u = np.array([ux, uy])
            ray_cap = min(cap, domain.ray_exit(center, u))
            return _first_crossing_generic(
                d_along_factory(u), level, ray_cap, min(lin_span, ray_cap),
                LIN_STEPS, GROWTH, bisect_steps, trace_tol,
            )

        def dips(ux, uy, rho_star):
            u = np.array([ux, uy])
            ray_cap = min(cap, domain.ray_exit(center, u))
            return _dips_below_generic(
                d_along_factory(u), level, rho_star, ray_cap, MULTI_SCAN_POINTS
            )

    thetas = 2.0 * math.pi * np.arange(rays) / rays
    vertices = np.full((rays, 2), math.nan)
    residuals = np.full(rays, math.nan)
    unbounded = []
    truncated = []
    multi = []
    for i, theta in enumerate(thetas):
        ux, uy = math.cos(theta), math.sin(theta)
        rho, resid, status = crossing(ux, uy)
        if status == RAY_CROSSED:
            vertices[i, 0] = center[0] + rho * ux
            vertices[i, 1] = center[1] + rho * uy
            residuals[i] = resid
            if multi_scan and dips(ux, uy, rho):
                multi.append(theta)
        elif status == RAY_TRUNCATED:
            truncated.append(theta)
        else:
            unbounded.append(theta)

    return BallTrace(
        thetas=thetas,
        vertices=vertices,
        residuals=residuals,
        unbounded_rays=np.array(unbounded),
        truncated_rays=np.array(truncated),
        multi_crossing_rays=np.array(multi),
        radius=level,
        cap=cap,
    )


# ---------------------------------------------------------------------------
# Intersection representation of Cassinian balls


@dataclass
class IntersectionCheckReport:
    """Membership comparison of B_{c_D}(x, R) against single-puncture balls."""

    tested: int
    boundary_samples: int
    violations: int
    disagreements_in_band: int
    band: float


def intersection_representation_check(
    domain: Domain,
    x,
    radius: float,
    boundary_samples: int = 1000,
    test_points: int = 1000,
    rng: np.random.Generator | None = None,
    band: float = 1e-9,
) -> IntersectionCheckReport:
    """Check B_{c_D}(x, R) = intersection over boundary punctures z of
    B_{c_{R^n minus z}}(x, R) on random test points.

    Membership on the two sides may legitimately disagree for points with
    |c_D(x, y) - R| inside the tolerance band; disagreements outside the
    band count as violations.
    """
    from .geometry import sample_boundary

    x = domain.require_member(x)
    if not (radius > 0.0):
        raise ParameterRangeError("radius must be positive")
    if rng is None:
        rng = np.random.default_rng(0)
    delta = domain._delta(x)
    if radius * delta < 1.0:
        spread = 1.5 * radius * delta * delta / (1.0 - radius * delta)
        spread = min(max(spread, 0.5 * delta), 10.0 * delta)
    else:
        spread = 4.0 * delta
    z = sample_boundary(
        domain, boundary_samples, rng=rng, center=x,
        halfwidth=4.0 * (delta + spread),
    )

    violations = 0
    in_band = 0
    tested = 0
    while tested < test_points:
        y = x + rng.uniform(-spread, spread, size=x.size)
        if not domain.contains(y):
            continue
        tested += 1
        c_true = metrics.cassinian(domain, x, y)
        dxy = _norm(x - y)
        prod = np.linalg.norm(x - z, axis=1) * np.linalg.norm(y - z, axis=1)
        c_sup = float(dxy / np.min(prod)) if dxy > 0.0 else 0.0
        lhs = c_true < radius
        rhs = c_sup < radius
        if lhs != rhs:
            if abs(c_true - radius) <= band:
                in_band += 1
            else:
                violations += 1
    return IntersectionCheckReport(
        tested=tested,
        boundary_samples=boundary_samples,
        violations=violations,
        disagreements_in_band=in_band,
        band=band,
    )


# ---------------------------------------------------------------------------
# Export


def _fmt(v: float) -> str:
    return repr(float(v))


def write_trace_csv(trace: BallTrace, path) -> None:
    """CSV rows ``theta,x,y,residual``; rays without a crossing keep the
    coordinate fields empty."""
    lines = ["theta,x,y,residual"]
    for i, theta in enumerate(trace.thetas):
        if trace.crossed[i]:
            lines.append(
                f"{_fmt(theta)},{_fmt(trace.vertices[i, 0])},"
                f"{_fmt(trace.vertices[i, 1])},{_fmt(trace.residuals[i])}"
            )
        else:
            lines.append(f"{_fmt(theta)},,,")
    data = "\n".join(lines) + "\n"
    if hasattr(path, "write"):
        path.write(data)
    else:
        with open(path, "w") as fh:
            fh.write(data)


def write_traces_svg(traces: Sequence[BallTrace], path) -> None:
    """One closed SVG path per trace; viewBox fits the data with 5% margin."""
    pts = np.vstack([t.polygon() for t in traces if t.polygon().size])
    if pts.size == 0:
        raise ParameterRangeError("no finite vertices to plot")
    xs, ys = pts[:, 0], -pts[:, 1]
    x0, x1 = float(xs.min()), float(xs.max())
    y0, y1 = float(ys.min()), float(ys.max())
    margin = 0.05 * max(x1 - x0, y1 - y0, 1e-12)
    x0 -= margin
    y0 -= margin
    w = (x1 - x0) + margin
    h = (y1 - y0) + margin
    stroke = max(w, h) / 400.0
    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" '
        f'viewBox="{_fmt(x0)} {_fmt(y0)} {_fmt(w)} {_fmt(h)}">',
    ]
    for t in traces:
        poly = t.polygon()
        if not poly.size:
            continue
        cmds = [f"M {_fmt(poly[0, 0])} {_fmt(-poly[0, 1])}"]
        cmds += [f"L {_fmt(p[0])} {_fmt(-p[1])}" for p in poly[1:]]
        closed = t.crossed.all()
        d = " ".join(cmds) + (" Z" if closed else "")
        parts.append(
            f'<path d="{d}" fill="none" stroke="black" stroke-width="{_fmt(stroke)}"/>'
        )
    parts.append("</svg>")
    data = "\n".join(parts) + "\n"
    if hasattr(path, "write"):
        path.write(data)
    else:
        with open(path, "w") as fh:
            fh.write(data)
