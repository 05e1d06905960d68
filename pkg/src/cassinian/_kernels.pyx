# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: scalar metric evaluation and ray tracing in 2D.

Statement-for-statement twin of ``_kernels_py``; see that module for the
documented contracts. Integer codes match ``_codes``.
"""

from libc.math cimport (INFINITY, NAN, acos, acosh, asinh, atan2, cbrt, cos,
                        fabs, hypot, isfinite, log, log1p, sin, sqrt)

BACKEND = "compiled"

cdef int METRIC_CASSINIAN = 0
cdef int METRIC_DISTANCE_RATIO = 1
cdef int METRIC_HYPERBOLIC = 2
cdef int METRIC_QUASIHYPERBOLIC = 3
cdef int METRIC_EUCLIDEAN = 4

cdef int DOMAIN_PUNCTURED_PLANE = 0
cdef int DOMAIN_UNIT_DISK = 1
cdef int DOMAIN_PUNCTURED_DISK = 2
cdef int DOMAIN_HALF_PLANE = 3

cdef int RAY_CROSSED = 1
cdef int RAY_NO_CROSSING = 0
cdef int RAY_TRUNCATED = 2

cdef int _N_SCAN = 512
cdef double _TWO_PI = 6.283185307179586476925287
cdef double _PI = 3.141592653589793238462643
cdef double _INV_PHI = 0.6180339887498948482045868
cdef double _INV_PHI2 = 0.3819660112501051517954132
cdef int _GOLDEN_ITERS = 60

cdef double[512] _COS_TAB
cdef double[512] _SIN_TAB
cdef int _k
for _k in range(_N_SCAN):
    _COS_TAB[_k] = cos(_TWO_PI * _k / _N_SCAN)
    _SIN_TAB[_k] = sin(_TWO_PI * _k / _N_SCAN)


cdef inline double _circle_obj2(double x0, double x1, double y0, double y1,
                                double ax, double ay, double c, double s) nogil:
    return (ax - 2.0 * (x0 * c + x1 * s)) * (ay - 2.0 * (y0 * c + y1 * s))


cdef (double, double) _min_product_circle(double x0, double x1,
                                          double y0, double y1) nogil:
    cdef double ax = 1.0 + x0 * x0 + x1 * x1
    cdef double ay = 1.0 + y0 * y0 + y1 * y1
    cdef double best_t = 0.0
    cdef double best_v = INFINITY
    cdef double best_gap = _TWO_PI / _N_SCAN
    cdef double v, r, base, off, t
    cdef double p0, p1
    cdef int k, which

    for k in range(_N_SCAN):
        v = _circle_obj2(x0, x1, y0, y1, ax, ay, _COS_TAB[k], _SIN_TAB[k])
        if v < best_v:
            best_v = v
            best_t = _TWO_PI * k / _N_SCAN

    for which in range(2):
        if which == 0:
            p0 = x0; p1 = x1
        else:
            p0 = y0; p1 = y1
        r = hypot(p0, p1)
        if r <= 0.0 or r >= 1.0:
            continue
        base = atan2(p1, p0)
        off = 0.25 * (1.0 - r)
        v = _circle_obj2(x0, x1, y0, y1, ax, ay, cos(base), sin(base))
        if v < best_v:
            best_v = v; best_t = base; best_gap = off
        while off < _PI:
            t = base + off
            v = _circle_obj2(x0, x1, y0, y1, ax, ay, cos(t), sin(t))
            if v < best_v:
                best_v = v; best_t = t; best_gap = off
            t = base - off
            v = _circle_obj2(x0, x1, y0, y1, ax, ay, cos(t), sin(t))
            if v < best_v:
                best_v = v; best_t = t; best_gap = off
            off *= 2.0

    cdef double lo = best_t - best_gap
    cdef double hi = best_t + best_gap
    cdef double h = hi - lo
    cdef double c = lo + _INV_PHI2 * h
    cdef double d = lo + _INV_PHI * h
    cdef double gc = _circle_obj2(x0, x1, y0, y1, ax, ay, cos(c), sin(c))
    cdef double gd = _circle_obj2(x0, x1, y0, y1, ax, ay, cos(d), sin(d))
    cdef int it
    for it in range(_GOLDEN_ITERS):
        if gc < gd:
            hi = d; d = c; gd = gc
            h = _INV_PHI * h
            c = lo + _INV_PHI2 * h
            gc = _circle_obj2(x0, x1, y0, y1, ax, ay, cos(c), sin(c))
        else:
            lo = c; c = d; gc = gd
            h = _INV_PHI * h
            d = lo + _INV_PHI * h
            gd = _circle_obj2(x0, x1, y0, y1, ax, ay, cos(d), sin(d))
    if gc < best_v:
        best_v = gc; best_t = c
    if gd < best_v:
        best_v = gd; best_t = d
    if best_v < 0.0:
        best_v = 0.0
    return sqrt(best_v), atan2(sin(best_t), cos(best_t))


cdef int _cubic_real_roots(double P, double Q, double disc, double shift,
                           double* out) nogil:
    cdef double sq, t1, t2, w, m, arg, phi
    cdef int k
    if disc > 0.0:
        sq = sqrt(disc)
        t1 = -0.5 * Q + sq
        t2 = -0.5 * Q - sq
        w = cbrt(t1) + cbrt(t2)
        out[0] = w + shift
        return 1
    if P == 0.0:
        out[0] = shift
        return 1
    m = 2.0 * sqrt(-P / 3.0)
    arg = 3.0 * Q / (P * m)
    if arg > 1.0:
        arg = 1.0
    elif arg < -1.0:
        arg = -1.0
    phi = acos(arg) / 3.0
    for k in range(3):
        out[k] = m * cos(phi - _TWO_PI * k / 3.0) + shift
    return 3


cdef (double, double) _min_product_line(double u, double a,
                                        double v, double b) nogil:
    cdef double A = u + v
    cdef double B = u * v
    cdef double p = -1.5 * A
    cdef double q = 0.5 * (A * A + 2.0 * B + a * a + b * b)
    cdef double r = -0.5 * (A * B + b * b * u + a * a * v)
    cdef double P = q - p * p / 3.0
    cdef double Q = 2.0 * p * p * p / 27.0 - p * q / 3.0 + r
    cdef double disc = 0.25 * Q * Q + P * P * P / 27.0
    cdef double shift = -p / 3.0
    cdef double[6] cands
    cdef int n = _cubic_real_roots(P, Q, disc, shift, &cands[0])
    cands[n] = u; cands[n + 1] = v; cands[n + 2] = 0.5 * (u + v)
    n += 3
    cdef double best_p = u
    cdef double best_v = INFINITY
    cdef double s, du, dv, val
    cdef int i
    for i in range(n):
        s = cands[i]
        du = s - u
        dv = s - v
        val = (du * du + a * a) * (dv * dv + b * b)
        if val < best_v:
            best_v = val
            best_p = s
    return sqrt(best_v), best_p


cdef double _metric_2d(int mcode, int dcode, double p0, double p1,
                       double x0, double x1, double y0, double y1) nogil:
    cdef double dx = x0 - y0
    cdef double dy = x1 - y1
    cdef double dist = hypot(dx, dy)
    cdef double rx, ry, vx0, vx1, vy0, vy1, ang, lr, prod, pp, delx, dely, den, th

    if dcode == DOMAIN_PUNCTURED_PLANE:
        rx = hypot(x0 - p0, x1 - p1)
        ry = hypot(y0 - p0, y1 - p1)
        if ry == 0.0:
            return INFINITY
        if mcode == METRIC_EUCLIDEAN:
            return dist
        if mcode == METRIC_CASSINIAN:
            return dist / (rx * ry)
        if mcode == METRIC_DISTANCE_RATIO:
            return log1p(dist / (rx if rx < ry else ry))
        if mcode == METRIC_QUASIHYPERBOLIC:
            vx0 = x0 - p0; vx1 = x1 - p1
            vy0 = y0 - p0; vy1 = y1 - p1
            ang = fabs(atan2(vx0 * vy1 - vx1 * vy0, vx0 * vy0 + vx1 * vy1))
            lr = log(rx / ry)
            return sqrt(ang * ang + lr * lr)
        return NAN

    if dcode == DOMAIN_UNIT_DISK or dcode == DOMAIN_PUNCTURED_DISK:
        ry = hypot(y0, y1)
        if ry >= 1.0:
            return INFINITY
        if dcode == DOMAIN_PUNCTURED_DISK and y0 == p0 and y1 == p1:
            return INFINITY
        rx = hypot(x0, x1)
        if mcode == METRIC_EUCLIDEAN:
            return dist
        if mcode == METRIC_CASSINIAN:
            prod = _min_product_circle(x0, x1, y0, y1)[0]
            if dcode == DOMAIN_PUNCTURED_DISK:
                pp = hypot(x0 - p0, x1 - p1) * hypot(y0 - p0, y1 - p1)
                if pp < prod:
                    prod = pp
            if prod == 0.0:
                return INFINITY
            return dist / prod
        if mcode == METRIC_DISTANCE_RATIO:
            delx = 1.0 - rx
            dely = 1.0 - ry
            if dcode == DOMAIN_PUNCTURED_DISK:
                pp = hypot(x0 - p0, x1 - p1)
                if pp < delx:
                    delx = pp
                pp = hypot(y0 - p0, y1 - p1)
                if pp < dely:
                    dely = pp
            if dely == 0.0:
                return INFINITY
            return log1p(dist / (delx if delx < dely else dely))
        if mcode == METRIC_HYPERBOLIC and dcode == DOMAIN_UNIT_DISK:
            den = (1.0 - rx * rx) * (1.0 - ry * ry)
            return 2.0 * asinh(dist / sqrt(den))
        return NAN

    if dcode == DOMAIN_HALF_PLANE:
        if y1 <= 0.0:
            return INFINITY
        if mcode == METRIC_EUCLIDEAN:
            return dist
        if mcode == METRIC_CASSINIAN:
            prod = _min_product_line(x0, x1, y0, y1)[0]
            return dist / prod
        if mcode == METRIC_DISTANCE_RATIO:
            return log1p(dist / (x1 if x1 < y1 else y1))
        if mcode == METRIC_HYPERBOLIC or mcode == METRIC_QUASIHYPERBOLIC:
            return acosh(1.0 + dist * dist / (2.0 * x1 * y1))
        return NAN

    return NAN


def min_product_circle(double x0, double x1, double y0, double y1):
    cdef (double, double) res = _min_product_circle(x0, x1, y0, y1)
    return res[0], res[1]


def min_product_line(double u, double a, double v, double b):
    cdef (double, double) res = _min_product_line(u, a, v, b)
    return res[0], res[1]


def metric_2d(int mcode, int dcode, double p0, double p1,
              double x0, double x1, double y0, double y1):
    return _metric_2d(mcode, dcode, p0, p1, x0, x1, y0, y1)


def ray_first_crossing(int mcode, int dcode, double p0, double p1,
                       double cx, double cy, double ux, double uy,
                       double level, double cap, double lin_span,
                       int lin_steps, double growth, int bisect_steps,
                       double trace_tol):
    cdef double prev = 0.0
    cdef double rho = 0.0
    cdef double h = lin_span / lin_steps
    cdef bint crossed = False
    cdef int i = 0
    cdef double v, lo, hi, mid, resid

    while True:
        i += 1
        if i <= lin_steps:
            rho = i * h
        else:
            rho = rho * growth
        if rho > cap:
            rho = cap
        v = _metric_2d(mcode, dcode, p0, p1, cx, cy, cx + rho * ux, cy + rho * uy)
        if v >= level:
            crossed = True
            break
        prev = rho
        if rho >= cap:
            break
    if not crossed:
        return cap, NAN, RAY_NO_CROSSING

    lo = prev
    hi = rho
    for i in range(bisect_steps):
        mid = 0.5 * (lo + hi)
        v = _metric_2d(mcode, dcode, p0, p1, cx, cy, cx + mid * ux, cy + mid * uy)
        if v >= level:
            hi = mid
        else:
            lo = mid
    v = _metric_2d(mcode, dcode, p0, p1, cx, cy, cx + hi * ux, cy + hi * uy)
    resid = fabs(v - level)
    if (not isfinite(v)) or resid > trace_tol:
        return hi, resid, RAY_TRUNCATED
    return hi, resid, RAY_CROSSED


def dips_below_after(int mcode, int dcode, double p0, double p1,
                     double cx, double cy, double ux, double uy,
                     double level, double rho_star, double cap, int npts):
    cdef double step, rho, v
    cdef int i
    if cap <= rho_star:
        return False
    step = (cap - rho_star) / npts
    for i in range(1, npts + 1):
        rho = rho_star + i * step
        v = _metric_2d(mcode, dcode, p0, p1, cx, cy, cx + rho * ux, cy + rho * uy)
        if v < level - 1e-12:
            return True
    return False
