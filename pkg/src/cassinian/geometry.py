"""Proper subdomains of R^n with boundary access.

The domain variants cover everything the metric layer needs: the punctured
space R^n \\ {a}, the open unit ball, the punctured unit ball, the upper
half-space and planar domains described by a sampled boundary polyline.
Each variant provides membership, distance to the boundary (closed form
where one exists, nearest-segment otherwise) and a 1-D parameterized
boundary minimizer used by the relative metrics.

Boundaries are taken in the compactified space, but the point at infinity
of an unbounded boundary is excluded from every search: the relative-metric
denominators grow without bound there, so it can never witness the
supremum.
"""

from __future__ import annotations

import math
from typing import Callable

import numpy as np

from .errors import CapabilityError, MembershipError, ParameterRangeError

Point = np.ndarray

# Default tolerances / search effort. The scan+golden defaults are sized so
# that the boundary minimizer reproduces a brute-force scan to well below
# the 1e-6 comparison tolerances used by the test suite.
TOL_BOUNDARY = 1e-10
COARSE_SCAN = 512
GOLDEN_ITERS = 60

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
_INV_PHI2 = (3.0 - math.sqrt(5.0)) / 2.0


def as_point(p) -> Point:
    """Validate and convert a coordinate sequence to a float vector."""
    a = np.asarray(p, dtype=float)
    if a.ndim != 1 or a.size < 2:
        raise ParameterRangeError(f"a point needs at least 2 coordinates, got {p!r}")
    if not np.all(np.isfinite(a)):
        raise ParameterRangeError(f"point coordinates must be finite, got {p!r}")
    return a


def _norm(v: Point) -> float:
    return float(np.linalg.norm(v))


class Domain:
    """Base class for proper subdomains of R^n."""

    #: fixed ambient dimension, or None when any n >= 2 is accepted
    dim: int | None = None

    def contains(self, x) -> bool:
        raise NotImplementedError

    def check_point(self, x) -> Point:
        x = as_point(x)
        if self.dim is not None and x.size != self.dim:
            raise ParameterRangeError(
                f"point has dimension {x.size}, domain expects {self.dim}"
            )
        return x

    def require_member(self, x) -> Point:
        x = self.check_point(x)
        if not self.contains(x):
            raise MembershipError(f"point {x.tolist()} is not in {self!r}")
        return x

    def boundary_distance(self, x) -> float:
        """Distance from an interior point to the domain boundary."""
        x = self.require_member(x)
        return self._delta(x)

    def boundary_distance_many(self, pts: np.ndarray) -> np.ndarray:
        """Vectorized boundary distance, without membership checks."""
        raise NotImplementedError

    def _delta(self, x: Point) -> float:
        raise NotImplementedError

    def ray_exit(self, x: Point, u: Point) -> float:
        """Sup of rho with x + rho*u still inside, inf for unbounded rays."""
        return math.inf


class PuncturedSpace(Domain):
    """R^n minus a single point."""

    def __init__(self, puncture):
        self.puncture = as_point(puncture)
        self.dim = self.puncture.size

    def __repr__(self):
        return f"PuncturedSpace({self.puncture.tolist()})"

    def contains(self, x) -> bool:
        x = self.check_point(x)
        return bool(np.any(x != self.puncture))

    def _delta(self, x: Point) -> float:
        return _norm(x - self.puncture)

    def boundary_distance_many(self, pts: np.ndarray) -> np.ndarray:
        return np.linalg.norm(pts - self.puncture, axis=-1)


class UnitBall(Domain):
    """The open Euclidean unit ball about the origin."""

    def __repr__(self):
        return "UnitBall()"

    def contains(self, x) -> bool:
        x = self.check_point(x)
        return _norm(x) < 1.0

    def _delta(self, x: Point) -> float:
        return 1.0 - _norm(x)

    def boundary_distance_many(self, pts: np.ndarray) -> np.ndarray:
        return 1.0 - np.linalg.norm(pts, axis=-1)

    def ray_exit(self, x: Point, u: Point) -> float:
        xu = float(x @ u)
        return -xu + math.sqrt(max(xu * xu + 1.0 - float(x @ x), 0.0))


class PuncturedUnitBall(Domain):
    """The open unit ball minus an interior point."""

    def __init__(self, puncture):
        self.puncture = as_point(puncture)
        if _norm(self.puncture) >= 1.0:
            raise ParameterRangeError("puncture must lie strictly inside the unit ball")
        self.dim = self.puncture.size

    def __repr__(self):
        return f"PuncturedUnitBall({self.puncture.tolist()})"

    def contains(self, x) -> bool:
        x = self.check_point(x)
        return _norm(x) < 1.0 and bool(np.any(x != self.puncture))

    def _delta(self, x: Point) -> float:
        return min(_norm(x - self.puncture), 1.0 - _norm(x))

    def boundary_distance_many(self, pts: np.ndarray) -> np.ndarray:
        return np.minimum(
            np.linalg.norm(pts - self.puncture, axis=-1),
            1.0 - np.linalg.norm(pts, axis=-1),
        )

    def ray_exit(self, x: Point, u: Point) -> float:
        xu = float(x @ u)
        return -xu + math.sqrt(max(xu * xu + 1.0 - float(x @ x), 0.0))


class HalfSpace(Domain):
    """The upper half-space x_n > 0."""

    def __init__(self, dim: int = 2):
        if dim < 2:
            raise ParameterRangeError("half-space dimension must be >= 2")
        self.dim = dim

    def __repr__(self):
        return f"HalfSpace(dim={self.dim})"

    def contains(self, x) -> bool:
        x = self.check_point(x)
        return float(x[-1]) > 0.0

    def _delta(self, x: Point) -> float:
        return float(x[-1])

    def boundary_distance_many(self, pts: np.ndarray) -> np.ndarray:
        return np.asarray(pts)[..., -1].astype(float)

    def ray_exit(self, x: Point, u: Point) -> float:
        un = float(u[-1])
        if un >= 0.0:
            return math.inf
        return -float(x[-1]) / un


class SampledBoundary(Domain):
    """A planar domain described by an ordered boundary polyline.

    With ``closed`` set the samples are a closed polyline and the domain is
    the interior of the polygon they bound; otherwise the domain is the
    plane minus the polyline.
    """

    def __init__(self, samples, closed: bool = True):
        pts = np.asarray(samples, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 2 or pts.shape[0] < 3:
            raise ParameterRangeError("sampled boundary needs >= 3 planar points")
        if not np.all(np.isfinite(pts)):
            raise ParameterRangeError("boundary samples must be finite")
        self.samples = pts
        self.closed = bool(closed)
        self.dim = 2

        import shapely

        self._shapely = shapely
        if self.closed:
            self._line = shapely.LinearRing(pts)
            self._poly = shapely.Polygon(pts)
        else:
            self._line = shapely.LineString(pts)
            self._poly = None

        segs = np.vstack([pts, pts[:1]]) if self.closed else pts
        self._verts = segs
        seg_len = np.linalg.norm(np.diff(segs, axis=0), axis=1)
        self._cumlen = np.concatenate([[0.0], np.cumsum(seg_len)])
        self.perimeter = float(self._cumlen[-1])

    def __repr__(self):
        kind = "closed" if self.closed else "open"
        return f"SampledBoundary({len(self.samples)} samples, {kind})"

    def contains(self, x) -> bool:
        x = self.check_point(x)
        p = self._shapely.Point(x)
        if self.closed:
            return bool(self._poly.contains(p)) and self._line.distance(p) > 0.0
        return self._line.distance(p) > 0.0

    def _delta(self, x: Point) -> float:
        return float(self._line.distance(self._shapely.Point(x)))

    def boundary_distance_many(self, pts: np.ndarray) -> np.ndarray:
        geoms = self._shapely.points(np.asarray(pts, dtype=float))
        return self._shapely.distance(self._line, geoms)

    def point_at(self, s: float) -> Point:
        """Point on the polyline at arc-length parameter s (wraps if closed)."""
        if self.closed:
            s = s % self.perimeter
        s = min(max(s, 0.0), self.perimeter)
        i = int(np.searchsorted(self._cumlen, s, side="right")) - 1
        i = min(max(i, 0), len(self._verts) - 2)
        seg = self._verts[i + 1] - self._verts[i]
        seg_len = self._cumlen[i + 1] - self._cumlen[i]
        frac = 0.0 if seg_len == 0.0 else (s - self._cumlen[i]) / seg_len
        return self._verts[i] + frac * seg

    def points_at(self, ss: np.ndarray) -> np.ndarray:
        """Vectorized :meth:`point_at`."""
        ss = np.asarray(ss, dtype=float)
        if self.closed:
            ss = np.mod(ss, self.perimeter)
        ss = np.clip(ss, 0.0, self.perimeter)
        idx = np.clip(
            np.searchsorted(self._cumlen, ss, side="right") - 1,
            0,
            len(self._verts) - 2,
        )
        seg = self._verts[idx + 1] - self._verts[idx]
        seg_len = self._cumlen[idx + 1] - self._cumlen[idx]
        frac = np.where(seg_len == 0.0, 0.0, (ss - self._cumlen[idx]) / np.where(seg_len == 0.0, 1.0, seg_len))
        return self._verts[idx] + frac[:, None] * seg

    def nearest_parameter(self, x: Point) -> float:
        """Arc-length parameter of the boundary point closest to x."""
        v0 = self._verts[:-1]
        d = self._verts[1:] - v0
        seg_len2 = np.einsum("ij,ij->i", d, d)
        t = np.clip(
            np.einsum("ij,ij->i", x - v0, d) / np.where(seg_len2 == 0, 1, seg_len2),
            0.0,
            1.0,
        )
        proj = v0 + t[:, None] * d
        i = int(np.argmin(np.linalg.norm(proj - x, axis=1)))
        return float(self._cumlen[i] + t[i] * math.sqrt(seg_len2[i]))

    def ray_exit(self, x: Point, u: Point) -> float:
        v0 = self._verts[:-1]
        d = self._verts[1:] - v0
        # solve x + rho*u = v0 + s*d per segment
        det = u[0] * (-d[:, 1]) - u[1] * (-d[:, 0])
        rhs = v0 - x
        with np.errstate(divide="ignore", invalid="ignore"):
            rho = (rhs[:, 0] * (-d[:, 1]) - rhs[:, 1] * (-d[:, 0])) / det
            s = (u[0] * rhs[:, 1] - u[1] * rhs[:, 0]) / det
        hit = (np.abs(det) > 1e-300) & (rho > 0) & (s >= 0.0) & (s <= 1.0)
        if not np.any(hit):
            return math.inf
        return float(np.min(rho[hit]))


# ---------------------------------------------------------------------------
# Boundary sampling (used by oracles and the ball-intersection check)


def sample_boundary(
    domain: Domain,
    count: int,
    rng: np.random.Generator | None = None,
    center: Point | None = None,
    halfwidth: float | None = None,
) -> np.ndarray:
    """Return an array of points on the finite part of the boundary.

    For the half-space the boundary is unbounded; samples are spread evenly
    over a window of the boundary hyperplane centered under ``center``
    (default: the origin) with the given half-width.
    """
    if isinstance(domain, PuncturedSpace):
        return domain.puncture[None, :].copy()
    if isinstance(domain, (UnitBall, PuncturedUnitBall)):
        dim = 2 if domain.dim is None else domain.dim
        if dim == 2:
            theta = np.linspace(0.0, 2.0 * math.pi, count, endpoint=False)
            pts = np.column_stack([np.cos(theta), np.sin(theta)])
        else:
            if rng is None:
                rng = np.random.default_rng(0)
            pts = rng.standard_normal((count, dim))
            pts /= np.linalg.norm(pts, axis=1, keepdims=True)
        if isinstance(domain, PuncturedUnitBall):
            pts = np.vstack([domain.puncture[None, :], pts])
        return pts
    if isinstance(domain, HalfSpace):
        if halfwidth is None:
            halfwidth = 10.0
        foot = np.zeros(domain.dim)
        if center is not None:
            foot = np.asarray(center, dtype=float).copy()
            foot[-1] = 0.0
        if domain.dim == 2:
            offs = np.linspace(-halfwidth, halfwidth, count)
            pts = np.tile(foot, (count, 1))
            pts[:, 0] += offs
        else:
            if rng is None:
                rng = np.random.default_rng(0)
            pts = np.tile(foot, (count, 1))
            pts[:, :-1] += rng.uniform(-halfwidth, halfwidth, (count, domain.dim - 1))
        return pts
    if isinstance(domain, SampledBoundary):
        ss = np.linspace(0.0, domain.perimeter, count, endpoint=domain.closed is False)
        return np.array([domain.point_at(s) for s in ss])
    raise CapabilityError(f"no boundary sampler for {domain!r}")


# ---------------------------------------------------------------------------
# Generic boundary minimizer


def _golden(g: Callable[[float], float], lo: float, hi: float, iters: int):
    h = hi - lo
    c = lo + _INV_PHI2 * h
    d = lo + _INV_PHI * h
    gc, gd = g(c), g(d)
    for _ in range(iters):
        if gc < gd:
            hi, d, gd = d, c, gc
            h = _INV_PHI * h
            c = lo + _INV_PHI2 * h
            gc = g(c)
        else:
            lo, c, gc = c, d, gd
            h = _INV_PHI * h
            d = lo + _INV_PHI * h
            gd = g(d)
    return (c, gc) if gc < gd else (d, gd)


def _refine_1d(g, ts: np.ndarray, iters: int, circular_span: float | None = None):
    """Evaluate g on sorted parameters ts, then golden-refine around the best."""
    ts = np.asarray(ts, dtype=float)
    if ts.size > 1:
        # merge near-duplicate parameters: a nearly-coincident neighbor
        # would otherwise collapse the golden bracket to zero width
        span = circular_span if circular_span is not None else ts[-1] - ts[0]
        sep = 1e-12 * max(1.0, abs(span))
        ts = ts[np.concatenate([[True], np.diff(ts) > sep])]
        if circular_span is not None and ts.size > 1:
            # the first and last parameter can coincide across the wrap
            if circular_span - (ts[-1] - ts[0]) <= sep:
                ts = ts[:-1]
    vals = np.array([g(t) for t in ts])
    i = int(np.argmin(vals))
    if circular_span is not None:
        lo = ts[i - 1] if i > 0 else ts[-1] - circular_span
        hi = ts[i + 1] if i + 1 < len(ts) else ts[0] + circular_span
    else:
        lo = ts[i - 1] if i > 0 else ts[i]
        hi = ts[i + 1] if i + 1 < len(ts) else ts[i]
    t_best, v_best = ts[i], vals[i]
    if hi > lo:
        t_ref, v_ref = _golden(g, lo, hi, iters)
        if v_ref < v_best:
            t_best, v_best = t_ref, v_ref
    return float(t_best), float(v_best)


def _anchor_ladder(base: float, gap: float, limit: float) -> list[float]:
    """Geometric offsets around an anchor parameter, bridging gap -> limit.

    Relative-metric objectives can dip sharply over a width comparable to
    the anchor point's distance to the boundary; a uniform coarse scan
    misses basins much narrower than its step, so each anchor gets its own
    two-sided geometric ladder.
    """
    out = [base]
    off = 0.25 * gap
    while off < limit:
        out.append(base + off)
        out.append(base - off)
        off *= 2.0
    return out


def _plane_basis(x: Point, y: Point):
    """Orthonormal basis of span(x, y), padded when degenerate."""
    n = x.size
    nx = _norm(x)
    if nx > 0.0:
        e1 = x / nx
    else:
        ny = _norm(y)
        if ny > 0.0:
            e1 = y / ny
        else:
            e1 = np.zeros(n)
            e1[0] = 1.0
    r = y - float(y @ e1) * e1
    nr = _norm(r)
    if nr > 1e-13 * max(1.0, _norm(y)):
        e2 = r / nr
    else:
        k = int(np.argmin(np.abs(e1)))
        e2 = np.zeros(n)
        e2[k] = 1.0
        e2 -= float(e2 @ e1) * e1
        e2 /= _norm(e2)
    return e1, e2


def boundary_minimize(
    domain: Domain,
    f: Callable[[Point], float],
    x,
    y,
    coarse: int = COARSE_SCAN,
    golden_iters: int = GOLDEN_ITERS,
):
    """Minimize f over the finite part of the boundary of ``domain``.

    Returns ``(p_star, f(p_star))``. The search strategies assume f(p)
    depends on p through the distances |p-x| and |p-y| and is nondecreasing
    in each, which holds for every M-relative denominator with monotone M;
    x and y are the anchor points of that objective. Strategy per variant:
    the single puncture point, a 1-D angle search on the great circle in
    span(x, y) for balls, a 1-D search along the boundary line through the
    anchor feet for the half-space (seeded with the exact critical points
    of the product objective), and an arc-length search for sampled
    boundaries. Coarse scan plus golden-section refinement everywhere, with
    extra geometric ladders around the anchors' nearest boundary points.
    """
    x = domain.require_member(x)
    y = domain.require_member(y)
    if x.size != y.size:
        raise ParameterRangeError("anchor points have mismatched dimensions")
    # canonical anchor order makes the search (and hence every symmetric
    # relative metric built on it) exactly symmetric in x and y
    if tuple(y) < tuple(x):
        x, y = y, x

    if isinstance(domain, PuncturedSpace):
        p = domain.puncture.copy()
        return p, float(f(p))

    if isinstance(domain, (UnitBall, PuncturedUnitBall)):
        p, v = _minimize_on_sphere(f, x, y, coarse, golden_iters)
        if isinstance(domain, PuncturedUnitBall):
            fa = float(f(domain.puncture))
            if fa < v:
                return domain.puncture.copy(), fa
        return p, v

    if isinstance(domain, HalfSpace):
        return _minimize_on_hyperplane(f, x, y, coarse, golden_iters)

    if isinstance(domain, SampledBoundary):
        return _minimize_on_polyline(domain, f, x, y, coarse, golden_iters)

    raise CapabilityError(f"no boundary minimizer for {domain!r}")


def _minimize_on_sphere(f, x, y, coarse, iters):
    e1, e2 = _plane_basis(x, y)

    def point(theta: float) -> Point:
        return math.cos(theta) * e1 + math.sin(theta) * e2

    def g(theta: float) -> float:
        return float(f(point(theta)))

    thetas = list(np.linspace(0.0, 2.0 * math.pi, coarse, endpoint=False))
    for p in (x, y):
        r = _norm(p)
        if 0.0 < r < 1.0:
            base = math.atan2(float(p @ e2), float(p @ e1))
            thetas.extend(_anchor_ladder(base, 1.0 - r, math.pi))
    ts = np.unique(np.mod(thetas, 2.0 * math.pi))
    t_best, v_best = _refine_1d(g, ts, iters, circular_span=2.0 * math.pi)
    return point(t_best), v_best


def _minimize_on_hyperplane(f, x, y, coarse, iters):
    n = x.size
    foot_x, foot_y = x.copy(), y.copy()
    foot_x[-1] = 0.0
    foot_y[-1] = 0.0
    hx, hy = float(x[-1]), float(y[-1])
    d = _norm(foot_y - foot_x)
    if d > 0.0:
        e = (foot_y - foot_x) / d
    else:
        e = np.zeros(n)
        e[0] = 1.0

    def point(s: float) -> Point:
        return foot_x + s * e

    def g(s: float) -> float:
        return float(f(point(s)))

    margin = 0.01 * (d + hx + hy) + 1e-9
    ss = list(np.linspace(-margin, d + margin, coarse))
    ss.extend(_anchor_ladder(0.0, hx, d + margin))
    ss.extend(_anchor_ladder(d, hy, d + margin))
    # exact critical points of the Cassinian product objective
    ss.extend(_product_cubic_roots(0.0, hx, d, hy))
    ts = np.unique(np.clip(ss, -margin - 1.0, d + margin + 1.0))
    s_best, v_best = _refine_1d(g, ts, iters)
    return point(s_best), v_best


def _product_cubic_roots(u: float, a: float, v: float, b: float) -> list[float]:
    """Real critical points of ((s-u)^2+a^2)((s-v)^2+b^2)."""
    A, B = u + v, u * v
    c3, c2, c1, c0 = 2.0, -3.0 * A, A * A + 2.0 * B + a * a + b * b, -(A * B + b * b * u + a * a * v)
    p = c2 / c3
    q = c1 / c3
    r = c0 / c3
    P = q - p * p / 3.0
    Q = 2.0 * p**3 / 27.0 - p * q / 3.0 + r
    disc = 0.25 * Q * Q + P**3 / 27.0
    shift = -p / 3.0
    roots: list[float] = []
    if disc > 0.0:
        sq = math.sqrt(disc)
        t1 = -0.5 * Q + sq
        t2 = -0.5 * Q - sq
        w = math.copysign(abs(t1) ** (1.0 / 3.0), t1) + math.copysign(
            abs(t2) ** (1.0 / 3.0), t2
        )
        roots.append(w + shift)
    elif P == 0.0:
        roots.append(shift)
    else:
        m = 2.0 * math.sqrt(-P / 3.0)
        arg = 3.0 * Q / (P * m)
        arg = min(1.0, max(-1.0, arg))
        phi = math.acos(arg) / 3.0
        for k in range(3):
            roots.append(m * math.cos(phi - 2.0 * math.pi * k / 3.0) + shift)
    return roots


def _minimize_on_polyline(domain: SampledBoundary, f, x, y, coarse, iters):
    L = domain.perimeter

    def g(s: float) -> float:
        return float(f(domain.point_at(s)))

    ss = list(np.linspace(0.0, L, coarse, endpoint=not domain.closed))
    ss.extend(domain._cumlen.tolist())
    for p in (x, y):
        base = domain.nearest_parameter(p)
        ss.extend(_anchor_ladder(base, domain._delta(p), L))
    if domain.closed:
        ts = np.unique(np.mod(ss, L))
        s_best, v_best = _refine_1d(g, ts, iters, circular_span=L)
    else:
        ts = np.unique(np.clip(ss, 0.0, L))
        s_best, v_best = _refine_1d(g, ts, iters)
    return domain.point_at(s_best), v_best
