import math

import numpy as np
import pytest

from cassinian import (
    CapabilityError,
    ParameterRangeError,
    PoleError,
    PuncturedSpace,
    SphereInversion,
    UnitBall,
    bilipschitz_distortion_check,
    canonical_inversion,
    cassinian,
    distortion_experiment,
)
from cassinian.moebius import affine_image_domain


def sharp_axis_pairs(a_abs=0.5):
    """Collinear pairs x = -t e1, y = -s e1 in the regime where both
    Cassinian infima are witnessed on the unit sphere, so the distortion
    ratio attains (1+|a|)/(1-|a|) exactly."""
    pairs = []
    for i in range(10):
        s = 0.70 + 0.02 * i
        for dt in (0.06, 0.1):
            t = s + dt
            pairs.append((np.array([-t, 0.0]), np.array([-s, 0.0])))
    return pairs


class TestCanonicalInversion:
    def test_center_and_radius(self):
        inv = canonical_inversion([0.5, 0.0])
        assert np.allclose(inv.center, [2.0, 0.0])
        assert inv.radius == pytest.approx(math.sqrt(3.0))

    def test_swaps_a_and_origin(self):
        a = np.array([0.3, -0.4])
        inv = canonical_inversion(a)
        assert np.linalg.norm(inv(a)) < 1e-14
        assert np.allclose(inv(np.zeros(2)), a, atol=1e-14)

    def test_axis_image_formula(self):
        a_abs = 0.5
        inv = canonical_inversion([a_abs, 0.0])
        for t in (0.2, 0.55, 0.9):
            img = inv(np.array([-t, 0.0]))
            expected = (a_abs + t) / (1.0 + a_abs * t)
            assert img[0] == pytest.approx(expected, abs=1e-14)
            assert img[1] == pytest.approx(0.0, abs=1e-14)

    def test_preserves_unit_ball(self, rng):
        inv = canonical_inversion([0.4, 0.2])
        for _ in range(50):
            p = rng.uniform(-1, 1, 2)
            if not 0 < np.linalg.norm(p) < 1:
                continue
            assert np.linalg.norm(inv(p)) < 1.0 + 1e-12

    def test_identity_case_rejected(self):
        with pytest.raises(ParameterRangeError):
            canonical_inversion([0.0, 0.0])

    def test_outside_ball_rejected(self):
        with pytest.raises(ParameterRangeError):
            canonical_inversion([1.0, 0.0])


class TestApply:
    def test_fixes_its_sphere(self, rng):
        inv = SphereInversion([1.0, -2.0], 1.7)
        for _ in range(20):
            th = rng.uniform(0, 2 * math.pi)
            p = inv.center + inv.radius * np.array([math.cos(th), math.sin(th)])
            assert np.allclose(inv(p), p, atol=1e-12)

    def test_involution(self, rng):
        inv = SphereInversion([0.5, 0.5], 2.0)
        for _ in range(50):
            p = rng.uniform(-4, 4, 2)
            if np.allclose(p, inv.center):
                continue
            assert np.allclose(inv(inv(p)), p, atol=1e-12)

    def test_cross_distance_identity(self, rng):
        inv = SphereInversion([-0.3, 1.1], 1.3)
        for _ in range(50):
            x, y = rng.uniform(-3, 3, 2), rng.uniform(-3, 3, 2)
            lhs = np.linalg.norm(inv(x) - inv(y))
            rhs = (
                inv.radius**2
                * np.linalg.norm(x - y)
                / (np.linalg.norm(x - inv.center) * np.linalg.norm(y - inv.center))
            )
            assert lhs == pytest.approx(rhs, rel=1e-12)

    def test_pole(self):
        inv = SphereInversion([1.0, 1.0], 1.0)
        with pytest.raises(PoleError):
            inv([1.0, 1.0])

    def test_orthogonal_composition_is_isometry(self, rng):
        # sigma composed with itself is the identity, so distances between
        # composed images reproduce the originals exactly
        inv = canonical_inversion([0.5, 0.0])
        for _ in range(25):
            x, y = rng.uniform(-0.9, 0.9, 2), rng.uniform(-0.9, 0.9, 2)
            lhs = np.linalg.norm(inv(inv(x)) - inv(inv(y)))
            assert lhs == pytest.approx(np.linalg.norm(x - y), abs=1e-12)


class TestDistortion:
    def test_sharpness_grid_hits_upper_bound(self):
        rep = distortion_experiment([0.5, 0.0], sharp_axis_pairs())
        assert rep.upper_bound == pytest.approx(3.0)
        assert rep.max_ratio == pytest.approx(3.0, abs=1e-9)
        assert rep.min_ratio == pytest.approx(3.0, abs=1e-9)
        assert rep.sharpness_gap_upper == pytest.approx(0.0, abs=1e-9)

    def test_lower_bound_attained_through_inverse_images(self):
        inv = canonical_inversion([0.5, 0.0])
        pairs = [(inv(x), inv(y)) for x, y in sharp_axis_pairs()]
        rep = distortion_experiment([0.5, 0.0], pairs)
        assert rep.min_ratio == pytest.approx(1.0 / 3.0, abs=1e-9)

    def test_random_pairs_respect_bounds(self, rng):
        a = np.array([0.3, 0.0])
        pairs = []
        while len(pairs) < 500:
            x, y = rng.uniform(-1, 1, 2), rng.uniform(-1, 1, 2)
            if 0 < np.linalg.norm(x) < 0.999 and 0 < np.linalg.norm(y) < 0.999:
                pairs.append((x, y))
        rep = distortion_experiment(a, pairs)
        assert rep.lower_bound == pytest.approx(7.0 / 13.0)
        assert rep.upper_bound == pytest.approx(13.0 / 7.0)
        assert rep.within_bounds(tol=1e-9)

    def test_identity_map_for_zero_puncture(self):
        pairs = [(np.array([0.3, 0.1]), np.array([-0.2, 0.4]))]
        rep = distortion_experiment([0.0, 0.0], pairs)
        assert rep.min_ratio == pytest.approx(1.0, abs=1e-12)
        assert rep.max_ratio == pytest.approx(1.0, abs=1e-12)

    def test_identical_pairs_skipped(self):
        p = np.array([0.3, 0.1])
        rep = distortion_experiment([0.5, 0.0], [(p, p), (p, np.array([0.1, 0.2]))])
        assert rep.skipped_identical == 1
        assert rep.pair_count == 1


class TestBilipschitz:
    def test_scaling_on_punctured_space(self, rng):
        dom = PuncturedSpace([0.0, 0.0])
        lam = 2.0
        pairs = [(rng.uniform(0.2, 2, 2), rng.uniform(-2, -0.2, 2)) for _ in range(30)]
        rep = bilipschitz_distortion_check(lam * np.eye(2), np.zeros(2), dom, pairs)
        assert rep.lipschitz_constant == pytest.approx(2.0)
        assert rep.bound == pytest.approx(8.0)
        assert rep.violations == 0
        # c on the punctured space is homogeneous of degree -1
        assert rep.min_ratio == pytest.approx(0.5, rel=1e-12)
        assert rep.max_ratio == pytest.approx(0.5, rel=1e-12)

    def test_rotation_is_exact_isometry(self, rng):
        dom = PuncturedSpace([0.0, 0.0])
        th = 0.7
        rot = np.array([[math.cos(th), -math.sin(th)], [math.sin(th), math.cos(th)]])
        pairs = [(rng.uniform(0.2, 2, 2), rng.uniform(-2, -0.2, 2)) for _ in range(20)]
        rep = bilipschitz_distortion_check(rot, np.zeros(2), dom, pairs)
        assert rep.lipschitz_constant == pytest.approx(1.0)
        assert rep.min_ratio == pytest.approx(1.0, rel=1e-9)
        assert rep.max_ratio == pytest.approx(1.0, rel=1e-9)

    def test_diagonal_stretch_within_cube_bound(self, rng):
        dom = PuncturedSpace([0.0, 0.0])
        mat = np.diag([2.0, 1.0])
        pairs = []
        while len(pairs) < 100:
            x, y = rng.uniform(-2, 2, 2), rng.uniform(-2, 2, 2)
            if np.linalg.norm(x) > 0.05 and np.linalg.norm(y) > 0.05:
                pairs.append((x, y))
        rep = bilipschitz_distortion_check(mat, np.zeros(2), dom, pairs)
        assert rep.bound == pytest.approx(8.0)
        assert rep.violations == 0
        assert 1.0 / 8.0 <= rep.min_ratio and rep.max_ratio <= 8.0

    def test_unrepresentable_image(self):
        with pytest.raises(CapabilityError):
            bilipschitz_distortion_check(
                np.diag([2.0, 1.0]), np.zeros(2), UnitBall(),
                [(np.array([0.1, 0.1]), np.array([0.2, -0.1]))],
            )

    def test_affine_image_of_punctured_space(self):
        dom = PuncturedSpace([1.0, 2.0])
        img = affine_image_domain(2.0 * np.eye(2), np.array([1.0, 0.0]), dom)
        assert isinstance(img, PuncturedSpace)
        assert np.allclose(img.puncture, [3.0, 4.0])

    def test_sharpness_consistency_with_cassinian(self):
        # the distortion experiment is the Mobius specialization of the
        # same ratio machinery; spot-check one pair against direct values
        from cassinian import PuncturedUnitBall

        a = np.array([0.5, 0.0])
        inv = canonical_inversion(a)
        x, y = np.array([-0.8, 0.0]), np.array([-0.7, 0.0])
        src = PuncturedUnitBall(np.zeros(2))
        dst = PuncturedUnitBall(a)
        ratio = cassinian(dst, inv(x), inv(y)) / cassinian(src, x, y)
        assert ratio == pytest.approx(3.0, abs=1e-12)
