import io
import math
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from cassinian import (
    BallSpec,
    CASSINIAN,
    CapabilityError,
    DISTANCE_RATIO,
    EUCLIDEAN,
    HalfSpace,
    MembershipError,
    ParameterRangeError,
    PuncturedSpace,
    QUASIHYPERBOLIC,
    SampledBoundary,
    UnitBall,
    cassinian,
    contains,
    intersection_representation_check,
    m_relative_kind,
    trace_2d,
    write_trace_csv,
    write_traces_svg,
)

PUNCTURED = PuncturedSpace([0.0, 0.0])


def apollonius_circle(radius):
    """Euclidean circle carrying the Cassinian circle about (1,0) in the
    punctured plane: center 1/(1-R^2), radius R/(1-R^2)."""
    return 1.0 / (1.0 - radius**2), radius / (1.0 - radius**2)


class TestBallSpec:
    def test_center_must_be_member(self):
        with pytest.raises(MembershipError):
            BallSpec(PUNCTURED, CASSINIAN, [0.0, 0.0], 0.5)

    def test_radius_positive(self):
        with pytest.raises(ParameterRangeError):
            BallSpec(PUNCTURED, CASSINIAN, [1.0, 0.0], 0.0)

    def test_contains_center(self):
        ball = BallSpec(PUNCTURED, CASSINIAN, [1.0, 0.0], 0.5)
        assert contains(ball, [1.0, 0.0])

    def test_boundary_point_excluded(self):
        # c((1,0),(2,0)) = 0.5 exactly: the ball is open
        ball = BallSpec(PUNCTURED, CASSINIAN, [1.0, 0.0], 0.5)
        assert not contains(ball, [2.0, 0.0])
        center, radius = apollonius_circle(0.5)
        assert math.hypot(2.0 - center, 0.0) == pytest.approx(radius)

    def test_membership_error_outside_domain(self):
        ball = BallSpec(PUNCTURED, CASSINIAN, [1.0, 0.0], 0.5)
        with pytest.raises(MembershipError):
            contains(ball, [0.0, 0.0])


class TestTrace:
    @pytest.mark.parametrize("radius", [0.3, 0.5, 0.9])
    def test_punctured_plane_circle(self, radius):
        ball = BallSpec(PUNCTURED, CASSINIAN, [1.0, 0.0], radius)
        trace = trace_2d(ball, rays=128)
        assert trace.crossed.all()
        center, rad = apollonius_circle(radius)
        dist = np.abs(np.linalg.norm(trace.polygon() - [center, 0.0], axis=1) - rad)
        assert dist.max() < 1e-6
        assert np.nanmax(trace.residuals) <= 1e-8
        assert not trace.multi_crossing

    def test_thetas_strictly_increasing(self):
        ball = BallSpec(PUNCTURED, CASSINIAN, [1.0, 0.0], 0.5)
        trace = trace_2d(ball, rays=64)
        assert np.all(np.diff(trace.thetas) > 0)
        assert trace.thetas[0] == 0.0
        assert trace.thetas[-1] < 2.0 * math.pi

    def test_unit_radius_ball_is_half_plane(self):
        # R = 1: the ball degenerates to Re > 1/2; crossings sit on the
        # vertical line through 1/2 and the rays pointing away never cross
        ball = BallSpec(PUNCTURED, CASSINIAN, [1.0, 0.0], 1.0)
        trace = trace_2d(ball, rays=64)
        assert trace.unbounded_rays.size > 0
        crossed = trace.polygon()
        assert np.abs(crossed[:, 0] - 0.5).max() < 1e-6

    def test_exterior_ball_flags(self):
        # R|x-a| > 1: the ball is the exterior of a disk; rays toward it
        # cross twice and rays away never cross
        ball = BallSpec(PUNCTURED, CASSINIAN, [1.0, 0.0], 1.2)
        trace = trace_2d(ball, rays=64)
        assert trace.unbounded_rays.size > 0
        assert trace.multi_crossing

    def test_bounded_iff_product_below_one(self):
        ball = BallSpec(PUNCTURED, CASSINIAN, [1.0, 0.0], 0.98)
        trace = trace_2d(ball, rays=32)
        assert trace.unbounded_rays.size == 0
        assert not trace.multi_crossing

    def test_euclidean_ball(self):
        dom = UnitBall()
        ball = BallSpec(dom, EUCLIDEAN, [0.2, 0.1], 0.3)
        trace = trace_2d(ball, rays=64)
        assert trace.crossed.all()
        dist = np.linalg.norm(trace.polygon() - [0.2, 0.1], axis=1)
        assert np.abs(dist - 0.3).max() < 1e-8

    def test_euclidean_ball_truncated_by_domain(self):
        dom = UnitBall()
        ball = BallSpec(dom, EUCLIDEAN, [0.5, 0.0], 0.8)
        trace = trace_2d(ball, rays=64)
        assert trace.truncated_rays.size > 0

    def test_generic_matches_kernel_path(self):
        # the m-relative product metric runs through the generic Python
        # tracer and must land on the same circle as the coded Cassinian
        kind = m_relative_kind(lambda a, b: a * b)
        ball = BallSpec(PUNCTURED, kind, [1.0, 0.0], 0.5)
        trace = trace_2d(ball, rays=16)
        center, rad = apollonius_circle(0.5)
        dist = np.abs(np.linalg.norm(trace.polygon() - [center, 0.0], axis=1) - rad)
        assert dist.max() < 1e-6

    def test_j_and_k_traces_round(self):
        for kind in (DISTANCE_RATIO, QUASIHYPERBOLIC):
            ball = BallSpec(PUNCTURED, kind, [1.0, 0.0], 0.4)
            trace = trace_2d(ball, rays=32)
            assert trace.crossed.all()
            assert np.nanmax(trace.residuals) <= 1e-8

    def test_rejects_3d(self):
        dom = PuncturedSpace([0.0, 0.0, 0.0])
        ball = BallSpec(dom, CASSINIAN, [1.0, 0.0, 0.0], 0.5)
        with pytest.raises(CapabilityError):
            trace_2d(ball)

    def test_rejects_few_rays(self):
        ball = BallSpec(PUNCTURED, CASSINIAN, [1.0, 0.0], 0.5)
        with pytest.raises(ParameterRangeError):
            trace_2d(ball, rays=8)

    def test_grid_quasihyperbolic_not_traceable(self):
        ball = BallSpec(UnitBall(), QUASIHYPERBOLIC, [0.0, 0.0], 0.5)
        with pytest.raises(CapabilityError):
            trace_2d(ball)

    def test_sampled_boundary_trace(self):
        th = np.linspace(0, 2 * math.pi, 40, endpoint=False)
        dom = SampledBoundary(np.column_stack([np.cos(th), np.sin(th)]), closed=True)
        ball = BallSpec(dom, CASSINIAN, [0.3, 0.1], 0.4)
        trace = trace_2d(ball, rays=24)
        assert trace.crossed.all()
        assert np.nanmax(trace.residuals) <= 1e-8


class TestIntersectionRepresentation:
    def test_punctured_space_identity_exact(self, rng):
        report = intersection_representation_check(
            PUNCTURED, [1.0, 0.0], 0.5, boundary_samples=1, test_points=300, rng=rng
        )
        assert report.violations == 0

    def test_unit_ball_centered(self, rng):
        report = intersection_representation_check(
            UnitBall(), [0.0, 0.0], 0.5, boundary_samples=400, test_points=300, rng=rng
        )
        assert report.violations == 0

    def test_half_plane(self, rng):
        report = intersection_representation_check(
            HalfSpace(2), [0.0, 1.0], 0.5, boundary_samples=600, test_points=200, rng=rng
        )
        assert report.violations == 0


class TestExport:
    def test_csv_schema(self):
        ball = BallSpec(PUNCTURED, CASSINIAN, [1.0, 0.0], 1.0)
        trace = trace_2d(ball, rays=32)
        buf = io.StringIO()
        write_trace_csv(trace, buf)
        lines = buf.getvalue().strip().split("\n")
        assert lines[0] == "theta,x,y,residual"
        assert len(lines) == 33
        blanks = [l for l in lines[1:] if l.endswith(",,,")]
        assert len(blanks) == trace.unbounded_rays.size + trace.truncated_rays.size
        full = [l for l in lines[1:] if not l.endswith(",,,")]
        theta, x, y, resid = full[0].split(",")
        assert float(resid) <= 1e-8
        assert cassinian(PUNCTURED, [1.0, 0.0], [float(x), float(y)]) == pytest.approx(
            1.0, abs=1e-7
        )

    def test_csv_round_trip_precision(self, tmp_path):
        ball = BallSpec(PUNCTURED, CASSINIAN, [1.0, 0.0], 0.5)
        trace = trace_2d(ball, rays=16)
        path = tmp_path / "trace.csv"
        write_trace_csv(trace, path)
        rows = np.loadtxt(path, delimiter=",", skiprows=1)
        assert np.array_equal(rows[:, 1:3], trace.vertices)

    def test_svg_valid_xml_one_path_per_ball(self, tmp_path):
        radii = [0.1, 0.2, 0.4, 0.6, 0.8, 0.9]
        traces = [
            trace_2d(BallSpec(PUNCTURED, CASSINIAN, [1.0, 0.0], r), rays=64)
            for r in radii
        ]
        path = tmp_path / "fig.svg"
        write_traces_svg(traces, path)
        root = ET.parse(path).getroot()
        assert root.tag.endswith("svg")
        assert "viewBox" in root.attrib
        paths = [e for e in root.iter() if e.tag.endswith("path")]
        assert len(paths) == len(radii)
        for el in paths:
            assert el.attrib["d"].endswith("Z")
