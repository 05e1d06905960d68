import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from cassinian import (
    CASSINIAN,
    CapabilityError,
    DISTANCE_RATIO,
    EUCLIDEAN,
    HYPERBOLIC,
    HalfSpace,
    MembershipError,
    PuncturedSpace,
    PuncturedUnitBall,
    QUASIHYPERBOLIC,
    UnitBall,
    cassinian,
    distance_ratio,
    evaluate,
    hyperbolic,
    m_relative,
    min_boundary_product,
    quasihyperbolic,
    quasihyperbolic_exact,
)

PUNCTURED = PuncturedSpace([0.0, 0.0])
BALL = UnitBall()
HALF = HalfSpace(2)

# frozen from the coarse-scan + golden oracle (2e6 samples over p in R,
# objective |x-p||p-y| with x=(0,1), y=(1,0.75))
HALF_PLANE_MIDPOINT_SUP = 1.0454360068346336


def random_in_disk(rng, count, rmax=0.999, rmin=0.0):
    pts = []
    while len(pts) < count:
        p = rng.uniform(-1.0, 1.0, 2)
        if rmin < np.linalg.norm(p) < rmax:
            pts.append(p)
    return np.array(pts)


class TestCassinian:
    def test_punctured_plane_value(self):
        assert cassinian(PUNCTURED, [1, 0], [2, 0]) == pytest.approx(0.5, abs=1e-15)

    def test_half_plane_unit_values(self):
        assert cassinian(HALF, [0, 1], [0, 0.5]) == pytest.approx(1.0, abs=1e-12)
        assert cassinian(HALF, [0, 1], [2, 1]) == pytest.approx(1.0, abs=1e-12)

    def test_half_plane_nonconvexity_midpoint(self):
        c = cassinian(HALF, [0, 1], [1, 0.75])
        assert c >= 9.0 * math.sqrt(17.0 / 1261.0) - 1e-9
        assert c == pytest.approx(HALF_PLANE_MIDPOINT_SUP, rel=1e-9)

    def test_coincident_points(self):
        for dom, x in [(PUNCTURED, [1, 0]), (BALL, [0.3, 0.2]), (HALF, [0, 2])]:
            assert cassinian(dom, x, x) == 0.0

    def test_membership_error(self):
        with pytest.raises(MembershipError):
            cassinian(BALL, [0.2, 0.0], [1.2, 0.0])

    def test_punctured_ball_combines_puncture_and_sphere(self):
        dom = PuncturedUnitBall([0.0, 0.0])
        x, y = np.array([0.05, 0.0]), np.array([-0.05, 0.0])
        # near the puncture the puncture term dominates the sphere term
        assert min_boundary_product(dom, x, y) == pytest.approx(0.0025, abs=1e-15)
        assert cassinian(dom, x, y) == pytest.approx(0.1 / 0.0025, rel=1e-12)

    def test_symmetry(self, rng):
        for dom, sampler in [
            (PUNCTURED, lambda: rng.uniform(-3, 3, 2)),
            (BALL, lambda: random_in_disk(rng, 1)[0]),
            (HALF, lambda: np.array([rng.uniform(-2, 2), rng.uniform(0.05, 2)])),
        ]:
            for _ in range(25):
                x, y = sampler(), sampler()
                if np.all(x == y) or not dom.contains(x):
                    continue
                assert cassinian(dom, x, y) == pytest.approx(
                    cassinian(dom, y, x), abs=1e-12, rel=1e-12
                )

    def test_triangle_inequality_punctured(self, rng):
        pts = rng.uniform(-3, 3, (10**4, 3, 2))
        norms = np.linalg.norm(pts, axis=2)
        keep = np.all(norms > 1e-6, axis=1)
        x, y, z = pts[keep, 0], pts[keep, 1], pts[keep, 2]

        def c(a, b):
            return np.linalg.norm(a - b, axis=1) / (
                np.linalg.norm(a, axis=1) * np.linalg.norm(b, axis=1)
            )

        assert np.all(c(x, y) <= c(x, z) + c(z, y) + 1e-9)

    @pytest.mark.parametrize("seed", [0, 1])
    def test_oracle_equivalence_unit_ball(self, seed):
        rng = np.random.default_rng(seed)
        pts = random_in_disk(rng, 60)
        for i in range(30):
            x, y = pts[2 * i], pts[2 * i + 1]
            mine = cassinian(BALL, x, y)
            brute = oracles.cassinian_unit_disk(x, y, samples=10**5)
            assert mine == pytest.approx(brute, rel=1e-6)

    @pytest.mark.parametrize("seed", [2, 3])
    def test_oracle_equivalence_half_plane(self, seed):
        rng = np.random.default_rng(seed)
        for _ in range(30):
            x = np.array([rng.uniform(-2, 2), rng.uniform(0.01, 2)])
            y = np.array([rng.uniform(-2, 2), rng.uniform(0.01, 2)])
            mine = cassinian(HALF, x, y)
            brute = oracles.cassinian_half_plane(x, y, samples=10**5)
            assert mine == pytest.approx(brute, rel=1e-6)

    def test_monotone_in_domain(self, rng):
        # smaller domain, larger metric: B^2 minus a point vs the plane
        # minus the same point, and the punctured ball vs the ball
        outer = PuncturedSpace([1.0, 0.0])
        inner = BALL
        for _ in range(20):
            x, y = random_in_disk(rng, 2)
            assert cassinian(outer, x, y) <= cassinian(inner, x, y) + 1e-12
        pball = PuncturedUnitBall([0.3, 0.0])
        for _ in range(20):
            x, y = random_in_disk(rng, 2)
            if not (pball.contains(x) and pball.contains(y)):
                continue
            assert cassinian(BALL, x, y) <= cassinian(pball, x, y) + 1e-12


class TestMRelative:
    def test_product_is_cassinian(self, rng):
        prod = lambda a, b: a * b
        cases = [
            (PUNCTURED, rng.uniform(-2, -0.1, 2), rng.uniform(0.1, 2, 2)),
            (BALL, [0.6, 0.1], [-0.3, 0.5]),
            (HALF, [0.0, 1.0], [1.0, 0.75]),
            (PuncturedUnitBall([0.1, 0.0]), [0.5, 0.2], [-0.2, -0.4]),
        ]
        for dom, x, y in cases:
            assert m_relative(dom, prod, x, y) == pytest.approx(
                cassinian(dom, x, y), abs=1e-12, rel=1e-12
            )

    def test_sum_gives_triangular_ratio(self):
        v = m_relative(PUNCTURED, lambda a, b: a + b, [1, 0], [2, 0])
        assert v == pytest.approx(1.0 / 3.0, abs=1e-12)

    def test_degenerate_pair(self):
        assert m_relative(BALL, lambda a, b: a + b, [0, 0], [0, 0]) == 0.0


class TestDistanceRatio:
    def test_punctured_log3(self):
        assert distance_ratio(PUNCTURED, [1, 0], [3, 0]) == pytest.approx(math.log(3.0))

    def test_punctured_sharpness_point(self):
        # x at distance 1 from the puncture, y1 at Euclidean distance
        # t/(1+t) toward it: j(x, y1) = log(1 + t)
        t = 0.37
        x = np.array([1.0, 0.0])
        y1 = x + (t / (1.0 + t)) * np.array([-1.0, 0.0])
        assert distance_ratio(PUNCTURED, x, y1) == pytest.approx(math.log1p(t), abs=1e-12)

    def test_zero_on_equal_points(self):
        assert distance_ratio(BALL, [0.2, 0.2], [0.2, 0.2]) == 0.0


class TestHyperbolic:
    def test_radial(self):
        assert hyperbolic(BALL, [0, 0], [0.5, 0]) == pytest.approx(math.log(3.0))

    def test_antipodal_equals_twice_j(self):
        x = np.array([0.5, 0.0])
        rho = hyperbolic(BALL, x, -x)
        j = distance_ratio(BALL, x, -x)
        assert rho == pytest.approx(2.0 * math.log(3.0), abs=1e-12)
        assert rho == pytest.approx(2.0 * j, abs=1e-9)

    def test_j_rho_2j_sandwich(self, rng):
        pts = random_in_disk(rng, 2000)
        for i in range(1000):
            x, y = pts[2 * i], pts[2 * i + 1]
            j = distance_ratio(BALL, x, y)
            rho = hyperbolic(BALL, x, y)
            assert j <= rho + 1e-12
            assert rho <= 2.0 * j + 1e-9

    def test_needs_ball_or_half_space(self):
        with pytest.raises(CapabilityError):
            hyperbolic(PUNCTURED, [1, 0], [2, 0])

    def test_half_space_matches_quasihyperbolic(self):
        x, y = [0.3, 1.2], [-0.5, 0.4]
        assert hyperbolic(HALF, x, y) == pytest.approx(quasihyperbolic(HALF, x, y))


class TestQuasihyperbolic:
    def test_radial_matches_line_integral(self):
        oracle = oracles.segment_density_integral(
            PUNCTURED.boundary_distance_many, [1.0, 0.0], [math.e, 0.0]
        )
        k = quasihyperbolic(PUNCTURED, [1, 0], [math.e, 0])
        assert k == pytest.approx(1.0, abs=1e-12)
        assert k == pytest.approx(oracle, abs=1e-3)

    def test_quarter_turn(self):
        assert quasihyperbolic(PUNCTURED, [1, 0], [0, 1]) == pytest.approx(math.pi / 2)

    def test_k_at_least_j(self, rng):
        for dom, sampler in [
            (PUNCTURED, lambda: rng.uniform(-3, 3, 2)),
            (HALF, lambda: np.array([rng.uniform(-2, 2), rng.uniform(0.05, 2)])),
        ]:
            for _ in range(1000):
                x, y = sampler(), sampler()
                if not (dom.contains(x) and dom.contains(y)):
                    continue
                assert quasihyperbolic(dom, x, y) >= distance_ratio(dom, x, y) - 1e-12

    def test_exactness_flags(self):
        assert quasihyperbolic_exact(PUNCTURED)
        assert quasihyperbolic_exact(HALF)
        assert not quasihyperbolic_exact(BALL)
        assert not quasihyperbolic_exact(PuncturedUnitBall([0.1, 0.0]))

    def test_grid_route_against_half_plane_closed_form(self):
        # the half-plane has a closed form, which makes it an independent
        # check of the grid-graph approximation machinery
        from cassinian import quasihyperbolic_grid

        x, y = np.array([0.0, 0.5]), np.array([1.0, 1.0])
        approx = quasihyperbolic_grid(HALF, x, y, spacing=0.01)
        exact = quasihyperbolic(HALF, x, y)
        assert approx == pytest.approx(exact, rel=0.02)

    def test_grid_route_on_unit_ball_runs(self):
        v = quasihyperbolic(BALL, [0.0, 0.0], [0.3, 0.0], grid_spacing=0.02)
        # k of the ball lies between j and the hyperbolic metric
        j = distance_ratio(BALL, [0.0, 0.0], [0.3, 0.0])
        rho = hyperbolic(BALL, [0.0, 0.0], [0.3, 0.0])
        assert j - 0.02 <= v <= rho + 0.02


class TestDispatch:
    @pytest.mark.parametrize(
        "kind,expected",
        [
            (CASSINIAN, 0.5),
            (DISTANCE_RATIO, math.log(2.0)),
            (QUASIHYPERBOLIC, math.log(2.0)),
            (EUCLIDEAN, 1.0),
        ],
    )
    def test_evaluate_punctured(self, kind, expected):
        assert evaluate(kind, PUNCTURED, [1, 0], [2, 0]) == pytest.approx(expected)

    def test_evaluate_rho_capability(self):
        with pytest.raises(CapabilityError):
            evaluate(HYPERBOLIC, PUNCTURED, [1, 0], [2, 0])


@settings(max_examples=100, deadline=None)
@given(
    x0=st.floats(-3, 3), x1=st.floats(-3, 3),
    y0=st.floats(-3, 3), y1=st.floats(-3, 3),
)
def test_cassinian_punctured_axioms(x0, x1, y0, y1):
    x = np.array([x0, x1])
    y = np.array([y0, y1])
    if np.linalg.norm(x) < 1e-6 or np.linalg.norm(y) < 1e-6:
        return
    cxy = cassinian(PUNCTURED, x, y)
    assert cxy >= 0.0
    assert cxy == pytest.approx(cassinian(PUNCTURED, y, x), rel=1e-12, abs=1e-12)
    if np.all(x == y):
        assert cxy == 0.0


@settings(max_examples=40, deadline=None)
@given(
    r1=st.floats(0.01, 0.95), t1=st.floats(0, 2 * math.pi),
    r2=st.floats(0.01, 0.95), t2=st.floats(0, 2 * math.pi),
)
def test_m_relative_product_identity_hypothesis(r1, t1, r2, t2):
    x = r1 * np.array([math.cos(t1), math.sin(t1)])
    y = r2 * np.array([math.cos(t2), math.sin(t2)])
    lhs = m_relative(BALL, lambda a, b: a * b, x, y)
    rhs = cassinian(BALL, x, y)
    assert lhs == pytest.approx(rhs, abs=1e-12, rel=1e-12)
