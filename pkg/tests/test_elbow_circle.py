"""Tests for the redundancy circle, arc sets and the body half-space."""

import math

import numpy as np
import pytest

from geoik.arm_model import ArmGeometry
from geoik.decouple import WristPoint
from geoik.elbow_circle import (
    TWO_PI,
    Arc,
    ArcSet,
    BodyHalfSpace,
    Reachability,
    circle_center,
    circle_frame,
    circle_radius,
    feasible_arc,
    intersection_plane,
    point_at,
    reachability,
    redundancy_circle,
    with_arc,
)
from geoik.errors import DegenerateInput, InternalInconsistency, Unreachable
from geoik.geom3 import norm, vec3

GEOM = ArmGeometry(d1=3, d2=3, long_mano=2)
SHORT_FOREARM = ArmGeometry(d1=3, d2=2, long_mano=2)
WRIST = WristPoint.at(3, 3, -3)


@pytest.fixture
def circle():
    return redundancy_circle(WRIST, GEOM)


class TestReachability:
    @pytest.mark.parametrize("m, expected", [
        ((3, 3, -3), Reachability.REACHABLE),
        ((6, 0, 0), Reachability.TANGENT_POINT),
        ((7, 0, 0), Reachability.TOO_FAR),
        ((0, 0, 0), Reachability.WRIST_AT_SHOULDER),
    ])
    def test_equal_links(self, m, expected):
        assert reachability(WristPoint.at(m), GEOM) is expected

    def test_too_close(self):
        assert reachability(WristPoint.at(0.5, 0, 0), SHORT_FOREARM) is Reachability.TOO_CLOSE

    def test_inner_tangent(self):
        assert reachability(WristPoint.at(0, 1, 0), SHORT_FOREARM) is Reachability.TANGENT_POINT

    def test_unreachable_circle_raises(self):
        with pytest.raises(Unreachable) as exc:
            redundancy_circle(WristPoint.at(7, 0, 0), GEOM)
        assert exc.value.reachability == "TooFar"


class TestIntersectionPlane:
    def test_worked_example(self):
        a, b, c, d = intersection_plane(WRIST, GEOM).coefficients
        assert (a / 3, b / 3, c / 3, d / 3) == pytest.approx((2, 2, -2, 9), abs=1e-12)

    def test_equal_links_bisect(self):
        plane = intersection_plane(WristPoint.at(0, 0, 4), GEOM)
        assert plane.normalized().coefficients == pytest.approx((0, 0, 1, 2))

    def test_unequal_links(self):
        assert intersection_plane(WRIST, SHORT_FOREARM).coefficients == pytest.approx((6, 6, -6, 32))

    def test_wrist_at_shoulder_raises(self):
        with pytest.raises(DegenerateInput):
            intersection_plane(WristPoint.at(0, 0, 0), GEOM)


class TestCircleFrame:
    def test_worked_example(self):
        basis_a, basis_b = circle_frame(WRIST)
        s2, s6 = math.sqrt(2), math.sqrt(6)
        assert basis_a == pytest.approx([-1 / s2, 1 / s2, 0], abs=1e-12)
        assert basis_b == pytest.approx([-1 / s6, -1 / s6, -2 / s6], abs=1e-12)
        assert basis_a == pytest.approx([-0.71, 0.71, 0], abs=0.01)
        assert basis_b == pytest.approx([-0.41, -0.41, -0.82], abs=0.01)

    def test_wrist_on_x_axis(self):
        basis_a, basis_b = circle_frame(WristPoint.at(1, 0, 0))
        assert basis_a == pytest.approx([0, 1, 0])
        assert basis_b == pytest.approx([0, 0, -1])

    def test_vertical_wrist_falls_back(self):
        basis_a, basis_b = circle_frame(WristPoint.at(0, 0, 5))
        assert basis_a.tolist() == [1, 0, 0]
        assert float(np.dot(basis_a, basis_b)) == pytest.approx(0.0)
        assert float(np.dot(basis_b, [0, 0, 1])) == pytest.approx(0.0)
        assert norm(basis_b) == pytest.approx(1.0)

    def test_frame_orthonormal_and_in_plane(self):
        rng = np.random.default_rng(3)
        for _ in range(200):
            m = rng.normal(size=3)
            a, b = circle_frame(WristPoint.at(m))
            assert norm(a) == pytest.approx(1.0, abs=1e-12)
            assert norm(b) == pytest.approx(1.0, abs=1e-12)
            for u, v in ((a, b), (a, m), (b, m)):
                assert abs(float(np.dot(u, v))) <= 1e-12 * max(1.0, norm(v))


class TestCircleGeometry:
    def test_worked_example(self, circle):
        assert circle.beta == 0.5
        assert circle.center == pytest.approx([1.5, 1.5, -1.5], abs=1e-12)
        assert circle.radius == pytest.approx(1.5, abs=1e-12)

    def test_equal_links_halve_the_wrist(self):
        rng = np.random.default_rng(5)
        for _ in range(50):
            m = rng.normal(size=3)
            _, beta = circle_center(WristPoint.at(m), GEOM)
            assert beta == pytest.approx(0.5, abs=1e-15)

    def test_unequal_links(self):
        center, beta = circle_center(WRIST, SHORT_FOREARM)
        assert beta == pytest.approx(32 / 54)
        assert center == pytest.approx([1.778, 1.778, -1.778], abs=1e-3)

    def test_radius_of_tangent_center(self):
        assert circle_radius(vec3(3, 0, 0), GEOM) == 0.0

    def test_radius_beyond_upper_arm_is_inconsistent(self):
        # Only reachable through a skipped reachability check.
        assert reachability(WRIST, SHORT_FOREARM) is Reachability.TOO_FAR
        center, _ = circle_center(WRIST, SHORT_FOREARM)
        with pytest.raises(InternalInconsistency):
            circle_radius(center, SHORT_FOREARM)

    def test_elbow_at_pi(self, circle):
        assert point_at(circle, math.pi) == pytest.approx([2.5607, 0.4393, -1.5], abs=1e-4)
        assert point_at(circle, math.pi) == pytest.approx([2.56, 0.44, -1.5], abs=0.01)

    def test_elbow_at_zero(self, circle):
        assert point_at(circle, 0.0) == pytest.approx([0.439, 2.561, -1.5], abs=0.01)

    def test_periodic(self, circle):
        assert point_at(circle, 1.3 + TWO_PI) == pytest.approx(point_at(circle, 1.3), abs=1e-12)

    def test_points_on_both_spheres(self, circle):
        for t in np.linspace(0, TWO_PI, 37):
            p = point_at(circle, t)
            assert norm(p) == pytest.approx(3.0, abs=1e-12)
            assert norm(p - WRIST.m) == pytest.approx(3.0, abs=1e-12)
            assert circle.plane.contains(p)

    def test_tangent_circle_is_a_point(self):
        c = redundancy_circle(WristPoint.at(6, 0, 0), GEOM)
        assert c.radius == 0.0
        assert point_at(c, 2.0) == pytest.approx([3, 0, 0])


class TestArcSet:
    def test_full_and_empty(self):
        assert ArcSet.full().is_full
        assert ArcSet.full().total_length == pytest.approx(TWO_PI)
        assert ArcSet.empty().is_empty
        assert not ArcSet.empty().contains(1.0)

    def test_wrapping_interval(self):
        arcs = ArcSet.from_interval(3 * math.pi / 2, math.pi)
        assert arcs.contains(0.0)
        assert arcs.contains(math.pi / 2)
        assert not arcs.contains(math.pi)
        assert arcs.midpoint() == pytest.approx(0.0, abs=1e-12)

    def test_negative_start_normalised(self):
        arcs = ArcSet.from_interval(-math.pi / 2, math.pi)
        assert arcs.arcs[0].start == pytest.approx(3 * math.pi / 2)

    def test_intersection_across_zero(self):
        a = ArcSet.from_interval(3 * math.pi / 2, math.pi)
        b = ArcSet.from_interval(0.0, math.pi)
        both = a.intersect(b)
        assert both.as_pairs() == [pytest.approx((0.0, math.pi / 2))]

    def test_intersection_can_split(self):
        a = ArcSet.from_interval(3 * math.pi / 2, 3 * math.pi / 2)
        b = ArcSet.from_interval(math.pi / 4, 3 * math.pi / 2)
        both = a.intersect(b)
        assert len(both.arcs) == 2
        assert both.total_length == pytest.approx(math.pi)

    def test_disjoint_is_empty(self):
        a = ArcSet.from_interval(0.0, 1.0)
        b = ArcSet.from_interval(2.0, 1.0)
        assert a.intersect(b).is_empty

    def test_midpoint_of_longest(self):
        arcs = ArcSet.from_arcs([Arc(0.0, 0.5), Arc(2.0, 2.0)])
        assert arcs.midpoint() == pytest.approx(3.0)

    def test_from_arcs_merges_overlaps(self):
        arcs = ArcSet.from_arcs([Arc(0.0, 1.0), Arc(0.5, 1.0)])
        assert arcs.as_pairs() == [pytest.approx((0.0, 1.5))]

    def test_sample_includes_endpoints(self):
        arcs = ArcSet.from_interval(math.pi / 2, math.pi)
        assert arcs.sample(5) == pytest.approx([math.pi / 2, 3 * math.pi / 4, math.pi, 5 * math.pi / 4, 3 * math.pi / 2])
        assert arcs.sample(2) == pytest.approx([math.pi / 2, 3 * math.pi / 2])

    def test_sample_needs_two(self):
        with pytest.raises(ValueError):
            ArcSet.full().sample(1)

    def test_empty_has_no_midpoint(self):
        with pytest.raises(DegenerateInput):
            ArcSet.empty().midpoint()


class TestFeasibleArc:
    def test_right_arm_keeps_far_half(self, circle):
        arcs = feasible_arc(circle, BodyHalfSpace("right"))
        ((lo, hi),) = arcs.as_pairs()
        assert lo == pytest.approx(math.pi / 2, abs=1e-9)
        assert hi == pytest.approx(3 * math.pi / 2, abs=1e-9)

    def test_left_arm_mirrors(self, circle):
        arcs = feasible_arc(circle, BodyHalfSpace("left"))
        assert arcs.contains(0.0)
        assert not arcs.contains(math.pi)
        assert arcs.total_length == pytest.approx(math.pi, abs=1e-9)

    def test_no_constraints_is_full(self, circle):
        assert feasible_arc(circle).is_full

    def test_constraint_excluding_everything(self, circle):
        # Plane through the shoulder facing away from the wrist.
        arcs = feasible_arc(circle, BodyHalfSpace(normal=-WRIST.m))
        assert arcs.is_empty

    def test_fixed_normal_is_mirrored_for_left_arm(self):
        n = BodyHalfSpace("left", normal=vec3(1, 2, 0)).allowed_normal(WRIST.m)
        assert n == pytest.approx(np.array([-1, 2, 0]) / math.sqrt(5))

    def test_body_allows_chosen_elbow(self, circle):
        body = BodyHalfSpace("right")
        assert body.allows(point_at(circle, math.pi), WRIST.m)
        assert not body.allows(point_at(circle, 0.0), WRIST.m)

    def test_predicate_arc_boundaries_refined(self, circle):
        arcs = feasible_arc(circle, predicate=lambda t: 1.0 <= t <= 2.0, resolution=90)
        ((lo, hi),) = arcs.as_pairs()
        assert lo == pytest.approx(1.0, abs=1e-8)
        assert hi == pytest.approx(2.0, abs=1e-8)

    def test_predicate_intersects_body(self, circle):
        arcs = feasible_arc(circle, BodyHalfSpace("right"), lambda t: t <= 2.0)
        ((lo, hi),) = arcs.as_pairs()
        assert lo == pytest.approx(math.pi / 2, abs=1e-9)
        assert hi == pytest.approx(2.0, abs=1e-8)

    def test_with_arc_keeps_geometry(self, circle):
        narrowed = with_arc(circle, ArcSet.from_interval(1.0, 0.5))
        assert narrowed.radius == circle.radius
        assert narrowed.feasible_arc.contains(1.2)
        assert circle.feasible_arc.is_full
