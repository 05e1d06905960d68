"""Sphere inversions and Cassinian distortion experiments.

The inversion in the sphere S(center, radius) is

    sigma(x) = center + (radius / |x - center|)^2 (x - center),

an involution that fixes its sphere and satisfies the cross-distance
identity |sigma(x) - sigma(y)| = radius^2 |x-y| / (|x-center||y-center|).
For an interior point a of the unit ball, the inversion centered at
a / |a|^2 with radius sqrt(1 - |a|^2) / |a| maps the unit ball onto itself
and swaps a with the origin; it is the Mobius map whose Cassinian
distortion between the punctured balls B^n \\ {0} and B^n \\ {a} is
measured here. The distortion ratios are predicted to stay inside
[(1-|a|)/(1+|a|), (1+|a|)/(1-|a|)], with both ends attained along the
diameter through a.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ParameterRangeError, PoleError
from .geometry import Domain, Point, PuncturedSpace, PuncturedUnitBall, as_point, _norm
from .metrics import cassinian


class SphereInversion:
    """Inversion in the sphere with the given center and radius."""

    def __init__(self, center, radius: float):
        self.center = as_point(center)
        if not (radius > 0.0 and np.isfinite(radius)):
            raise ParameterRangeError("inversion radius must be positive and finite")
        self.radius = float(radius)

    def __repr__(self):
        return f"SphereInversion(center={self.center.tolist()}, radius={self.radius})"

    def __call__(self, x) -> Point:
        return apply(self, x)


def canonical_inversion(a) -> SphereInversion:
    """The self-map of the unit ball swapping the interior point a with 0.

    Inversion in the sphere centered at a / |a|^2 with radius
    sqrt(1 - |a|^2) / |a|; that sphere is orthogonal to the unit sphere.
    Rejects a = 0 (the identity map does the job there, and an inversion
    cannot represent it) and |a| >= 1.
    """
    a = as_point(a)
    na = _norm(a)
    if na == 0.0:
        raise ParameterRangeError(
            "a = 0 needs no inversion: use the identity map instead"
        )
    if na >= 1.0:
        raise ParameterRangeError("the swapped point must lie inside the unit ball")
    center = a / (na * na)
    radius = np.sqrt(1.0 - na * na) / na
    return SphereInversion(center, radius)


def apply(inv: SphereInversion, x) -> Point:
    """Apply the inversion; the center itself maps to infinity."""
    x = as_point(x)
    if x.size != inv.center.size:
        raise ParameterRangeError("point and inversion dimensions differ")
    v = x - inv.center
    d2 = float(v @ v)
    if d2 == 0.0:
        raise PoleError("the inversion center has no finite image")
    return inv.center + (inv.radius * inv.radius / d2) * v


@dataclass
class DistortionReport:
    """Observed Cassinian distortion ratios of a punctured-ball Mobius map."""

    puncture: list[float]
    lower_bound: float
    upper_bound: float
    pair_count: int
    skipped_identical: int
    min_ratio: float
    max_ratio: float
    sharpness_gap_lower: float
    sharpness_gap_upper: float
    ratios: list[float] = field(repr=False)

    def within_bounds(self, tol: float = 1e-9) -> bool:
        return (
            self.min_ratio >= self.lower_bound * (1.0 - tol) - tol
            and self.max_ratio <= self.upper_bound * (1.0 + tol) + tol
        )


def distortion_experiment(a, pairs, tol: float = 1e-9) -> DistortionReport:
    """Ratios c_{B^n \\ {a}}(f(x), f(y)) / c_{B^n \\ {0}}(x, y) over pairs.

    f is the canonical inversion swapping 0 and a (the identity when
    a = 0). Pairs with x = y are skipped rather than scored as 0/0.
    """
    a = as_point(a)
    na = _norm(a)
    if na >= 1.0:
        raise ParameterRangeError("the target puncture must lie inside the unit ball")
    n = a.size
    src = PuncturedUnitBall(np.zeros(n))
    if na > 0.0:
        f = canonical_inversion(a)
        dst = PuncturedUnitBall(a)
    else:
        f = None
        dst = src

    lower = (1.0 - na) / (1.0 + na)
    upper = (1.0 + na) / (1.0 - na)
    ratios = []
    skipped = 0
    for x, y in pairs:
        x = as_point(x)
        y = as_point(y)
        if np.array_equal(x, y):
            skipped += 1
            continue
        c0 = cassinian(src, x, y)
        fx = f(x) if f is not None else x
        fy = f(y) if f is not None else y
        ca = cassinian(dst, fx, fy)
        ratios.append(ca / c0)
    if not ratios:
        raise ParameterRangeError("no distinct pairs to measure")
    rmin = min(ratios)
    rmax = max(ratios)
    return DistortionReport(
        puncture=a.tolist(),
        lower_bound=lower,
        upper_bound=upper,
        pair_count=len(ratios),
        skipped_identical=skipped,
        min_ratio=rmin,
        max_ratio=rmax,
        sharpness_gap_lower=rmin - lower,
        sharpness_gap_upper=upper - rmax,
        ratios=ratios,
    )


@dataclass
class BilipschitzReport:
    """L^3-sandwich check of the Cassinian metric under an affine map."""

    lipschitz_constant: float
    bound: float
    pair_count: int
    skipped_identical: int
    min_ratio: float
    max_ratio: float
    violations: int
    ratios: list[float] = field(repr=False)


def affine_image_domain(matrix: np.ndarray, offset: np.ndarray, domain: Domain) -> Domain:
    """The image f(D) of a domain under x -> matrix @ x + offset.

    Only images representable as a Domain variant are supported; punctured
    spaces map to punctured spaces, and the unit ball survives orthogonal
    maps with no translation.
    """
    from .errors import CapabilityError
    from .geometry import HalfSpace, UnitBall

    if isinstance(domain, PuncturedSpace):
        return PuncturedSpace(matrix @ domain.puncture + offset)
    n = matrix.shape[0]
    orthogonal = np.allclose(matrix @ matrix.T, np.eye(n), atol=1e-12)
    if isinstance(domain, UnitBall) and orthogonal and np.allclose(offset, 0.0):
        return UnitBall()
    if isinstance(domain, PuncturedUnitBall) and orthogonal and np.allclose(offset, 0.0):
        return PuncturedUnitBall(matrix @ domain.puncture)
    if isinstance(domain, HalfSpace) and orthogonal:
        en = np.zeros(n)
        en[-1] = 1.0
        if np.allclose(matrix @ en, en, atol=1e-12) and abs(float(offset[-1])) == 0.0:
            return HalfSpace(n)
    raise CapabilityError("the affine image of this domain is not representable")


def bilipschitz_distortion_check(
    matrix, offset, domain: Domain, pairs, tol: float = 1e-9
) -> BilipschitzReport:
    """Verify 1/L^3 <= c_{D'}(f x, f y) / c_D(x, y) <= L^3 for an affine f."""
    matrix = np.asarray(matrix, dtype=float)
    offset = np.asarray(offset, dtype=float)
    sig = np.linalg.svd(matrix, compute_uv=False)
    if sig[-1] <= 0.0:
        raise ParameterRangeError("the affine map must be invertible")
    lc = float(max(sig[0], 1.0 / sig[-1]))
    bound = lc**3
    image = affine_image_domain(matrix, offset, domain)

    ratios = []
    skipped = 0
    violations = 0
    for x, y in pairs:
        x = as_point(x)
        y = as_point(y)
        if np.array_equal(x, y):
            skipped += 1
            continue
        c0 = cassinian(domain, x, y)
        c1 = cassinian(image, matrix @ x + offset, matrix @ y + offset)
        ratio = c1 / c0
        ratios.append(ratio)
        if ratio > bound * (1.0 + tol) + tol or ratio < (1.0 - tol) / bound - tol:
            violations += 1
    if not ratios:
        raise ParameterRangeError("no distinct pairs to measure")
    return BilipschitzReport(
        lipschitz_constant=lc,
        bound=bound,
        pair_count=len(ratios),
        skipped_identical=skipped,
        min_ratio=min(ratios),
        max_ratio=max(ratios),
        violations=violations,
        ratios=ratios,
    )
