"""Pure-Python kernels: scalar metric evaluation and ray tracing in 2D.

This module is the fallback twin of the compiled extension ``_kernels``;
both expose the same functions and the backend is chosen at import time in
``_backend``. Everything here is scalar double arithmetic so the compiled
twin can mirror it statement for statement.
"""

from __future__ import annotations

import math

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
    RAY_CROSSED,
    RAY_NO_CROSSING,
    RAY_TRUNCATED,
)

BACKEND = "pure-python"

_N_SCAN = 512
_TWO_PI = 2.0 * math.pi
_COS = [math.cos(_TWO_PI * k / _N_SCAN) for k in range(_N_SCAN)]
_SIN = [math.sin(_TWO_PI * k / _N_SCAN) for k in range(_N_SCAN)]
_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
_INV_PHI2 = (3.0 - math.sqrt(5.0)) / 2.0
_GOLDEN_ITERS = 60


def _circle_obj2(x0, x1, y0, y1, ax, ay, c, s):
    # |x-z|^2 |z-y|^2 for z = (c, s) on the unit circle
    return (ax - 2.0 * (x0 * c + x1 * s)) * (ay - 2.0 * (y0 * c + y1 * s))


def min_product_circle(x0: float, x1: float, y0: float, y1: float):
    """Min over the unit circle of |x-z||z-y| for planar x, y inside it.

    Returns ``(value, theta)``. Uniform coarse scan plus two-sided geometric
    ladders around the directions of x and y (where the factors dip over a
    width ~ their distance to the circle), then golden-section refinement.
    """
    ax = 1.0 + x0 * x0 + x1 * x1
    ay = 1.0 + y0 * y0 + y1 * y1

    best_t = 0.0
    best_v = math.inf
    best_gap = _TWO_PI / _N_SCAN
    for k in range(_N_SCAN):
        v = _circle_obj2(x0, x1, y0, y1, ax, ay, _COS[k], _SIN[k])
        if v < best_v:
            best_v = v
            best_t = _TWO_PI * k / _N_SCAN

    for (p0, p1) in ((x0, x1), (y0, y1)):
        r = math.hypot(p0, p1)
        if r <= 0.0 or r >= 1.0:
            continue
        base = math.atan2(p1, p0)
        off = 0.25 * (1.0 - r)
        v = _circle_obj2(x0, x1, y0, y1, ax, ay, math.cos(base), math.sin(base))
        if v < best_v:
            best_v, best_t, best_gap = v, base, off
        while off < math.pi:
            for t in (base + off, base - off):
                v = _circle_obj2(x0, x1, y0, y1, ax, ay, math.cos(t), math.sin(t))
                if v < best_v:
                    best_v, best_t, best_gap = v, t, off
            off *= 2.0

    lo = best_t - best_gap
    hi = best_t + best_gap
    h = hi - lo
    c = lo + _INV_PHI2 * h
    d = lo + _INV_PHI * h
    gc = _circle_obj2(x0, x1, y0, y1, ax, ay, math.cos(c), math.sin(c))
    gd = _circle_obj2(x0, x1, y0, y1, ax, ay, math.cos(d), math.sin(d))
    for _ in range(_GOLDEN_ITERS):
        if gc < gd:
            hi, d, gd = d, c, gc
            h = _INV_PHI * h
            c = lo + _INV_PHI2 * h
            gc = _circle_obj2(x0, x1, y0, y1, ax, ay, math.cos(c), math.sin(c))
        else:
            lo, c, gc = c, d, gd
            h = _INV_PHI * h
            d = lo + _INV_PHI * h
            gd = _circle_obj2(x0, x1, y0, y1, ax, ay, math.cos(d), math.sin(d))
    if gc < best_v:
        best_v, best_t = gc, c
    if gd < best_v:
        best_v, best_t = gd, d
    if best_v < 0.0:
        best_v = 0.0
    return math.sqrt(best_v), math.atan2(math.sin(best_t), math.cos(best_t))


def min_product_line(u: float, a: float, v: float, b: float):
    """Min over real p of sqrt((p-u)^2+a^2) * sqrt((p-v)^2+b^2).

    Returns ``(value, p)``; a and b are the (positive) heights of the two
    anchor points over the boundary line. Exact: the derivative is a cubic
    whose real roots are solved in closed form.
    """
    A = u + v
    B = u * v
    # monic cubic s^3 + p s^2 + q s + r, from d/ds of the squared product
    p = -1.5 * A
    q = 0.5 * (A * A + 2.0 * B + a * a + b * b)
    r = -0.5 * (A * B + b * b * u + a * a * v)
    P = q - p * p / 3.0
    Q = 2.0 * p * p * p / 27.0 - p * q / 3.0 + r
    disc = 0.25 * Q * Q + P * P * P / 27.0
    shift = -p / 3.0

    best_p = u
    best_v = math.inf
    for s in _cubic_real_roots(P, Q, disc, shift) + [u, v, 0.5 * (u + v)]:
        du = s - u
        dv = s - v
        val = (du * du + a * a) * (dv * dv + b * b)
        if val < best_v:
            best_v = val
            best_p = s
    return math.sqrt(best_v), best_p


def _cubic_real_roots(P, Q, disc, shift):
    roots = []
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
        if arg > 1.0:
            arg = 1.0
        elif arg < -1.0:
            arg = -1.0
        phi = math.acos(arg) / 3.0
        for k in range(3):
            roots.append(m * math.cos(phi - _TWO_PI * k / 3.0) + shift)
    return roots


def metric_2d(
    mcode: int,
    dcode: int,
    p0: float,
    p1: float,
    x0: float,
    x1: float,
    y0: float,
    y1: float,
) -> float:
    """Scalar metric d(x, y) on a coded planar domain.

    Returns +inf when y lies outside the domain (x is assumed valid), which
    is the convention the ray tracer relies on. Unsupported metric/domain
    combinations return NaN; the Python layer validates them up front.
    """
    dx = x0 - y0
    dy = x1 - y1
    dist = math.hypot(dx, dy)

    if dcode == DOMAIN_PUNCTURED_PLANE:
        rx = math.hypot(x0 - p0, x1 - p1)
        ry = math.hypot(y0 - p0, y1 - p1)
        if ry == 0.0:
            return math.inf
        if mcode == METRIC_EUCLIDEAN:
            return dist
        if mcode == METRIC_CASSINIAN:
            return dist / (rx * ry)
        if mcode == METRIC_DISTANCE_RATIO:
            return math.log1p(dist / min(rx, ry))
        if mcode == METRIC_QUASIHYPERBOLIC:
            vx0, vx1 = x0 - p0, x1 - p1
            vy0, vy1 = y0 - p0, y1 - p1
            ang = abs(math.atan2(vx0 * vy1 - vx1 * vy0, vx0 * vy0 + vx1 * vy1))
            lr = math.log(rx / ry)
            return math.sqrt(ang * ang + lr * lr)
        return math.nan

    if dcode == DOMAIN_UNIT_DISK or dcode == DOMAIN_PUNCTURED_DISK:
        ry = math.hypot(y0, y1)
        if ry >= 1.0:
            return math.inf
        if dcode == DOMAIN_PUNCTURED_DISK and y0 == p0 and y1 == p1:
            return math.inf
        rx = math.hypot(x0, x1)
        if mcode == METRIC_EUCLIDEAN:
            return dist
        if mcode == METRIC_CASSINIAN:
            prod, _ = min_product_circle(x0, x1, y0, y1)
            if dcode == DOMAIN_PUNCTURED_DISK:
                pp = math.hypot(x0 - p0, x1 - p1) * math.hypot(y0 - p0, y1 - p1)
                if pp < prod:
                    prod = pp
            if prod == 0.0:
                return math.inf
            return dist / prod
        if mcode == METRIC_DISTANCE_RATIO:
            delx = 1.0 - rx
            dely = 1.0 - ry
            if dcode == DOMAIN_PUNCTURED_DISK:
                delx = min(delx, math.hypot(x0 - p0, x1 - p1))
                dely = min(dely, math.hypot(y0 - p0, y1 - p1))
            if dely == 0.0:
                return math.inf
            return math.log1p(dist / min(delx, dely))
        if mcode == METRIC_HYPERBOLIC and dcode == DOMAIN_UNIT_DISK:
            den = (1.0 - rx * rx) * (1.0 - ry * ry)
            return 2.0 * math.asinh(dist / math.sqrt(den))
        return math.nan

    if dcode == DOMAIN_HALF_PLANE:
        if y1 <= 0.0:
            return math.inf
        if mcode == METRIC_EUCLIDEAN:
            return dist
        if mcode == METRIC_CASSINIAN:
            prod, _ = min_product_line(x0, x1, y0, y1)
            return dist / prod
        if mcode == METRIC_DISTANCE_RATIO:
            return math.log1p(dist / min(x1, y1))
        if mcode == METRIC_HYPERBOLIC or mcode == METRIC_QUASIHYPERBOLIC:
            return math.acosh(1.0 + dist * dist / (2.0 * x1 * y1))
        return math.nan

    return math.nan


def ray_first_crossing(
    mcode: int,
    dcode: int,
    p0: float,
    p1: float,
    cx: float,
    cy: float,
    ux: float,
    uy: float,
    level: float,
    cap: float,
    lin_span: float,
    lin_steps: int,
    growth: float,
    bisect_steps: int,
    trace_tol: float,
):
    """First rho in (0, cap] with d(center, center + rho*u) = level.

    Scans a linear ladder up to ``lin_span`` then a geometric one up to the
    cap, brackets the first sample at or above the level and bisects.
    Returns ``(rho, residual, status)`` with status RAY_CROSSED,
    RAY_NO_CROSSING (still below the level at the cap) or RAY_TRUNCATED
    (the metric jumped past the level, e.g. at a domain exit).
    """
    prev = 0.0
    rho = 0.0
    h = lin_span / lin_steps
    crossed = False
    i = 0
    while True:
        i += 1
        if i <= lin_steps:
            rho = i * h
        else:
            rho = rho * growth
        if rho > cap:
            rho = cap
        v = metric_2d(mcode, dcode, p0, p1, cx, cy, cx + rho * ux, cy + rho * uy)
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
        v = metric_2d(mcode, dcode, p0, p1, cx, cy, cx + mid * ux, cy + mid * uy)
        if v >= level:
            hi = mid
        else:
            lo = mid
    v = metric_2d(mcode, dcode, p0, p1, cx, cy, cx + hi * ux, cy + hi * uy)
    resid = abs(v - level)
    if not math.isfinite(v) or resid > trace_tol:
        return hi, resid, RAY_TRUNCATED
    return hi, resid, RAY_CROSSED


def dips_below_after(
    mcode: int,
    dcode: int,
    p0: float,
    p1: float,
    cx: float,
    cy: float,
    ux: float,
    uy: float,
    level: float,
    rho_star: float,
    cap: float,
    npts: int,
) -> bool:
    """Scan (rho_star, cap] and report whether d drops back below the level."""
    if cap <= rho_star:
        return False
    step = (cap - rho_star) / npts
    for i in range(1, npts + 1):
        rho = rho_star + i * step
        v = metric_2d(mcode, dcode, p0, p1, cx, cy, cx + rho * ux, cy + rho * uy)
        if v < level - 1e-12:
            return True
    return False
