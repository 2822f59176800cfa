import math

import pytest

from socnav.geometry import Pose2, Segment2, Vec2
from socnav.pedestrians import (
    PedestrianState,
    SfmParams,
    sfm_force,
    step_pedestrians,
)
from socnav.robot import RobotState, Twist


def ped(pid=0, pos=(0.0, 0.0), vel=(0.0, 0.0), goal=(10.0, 0.0), **kw) -> PedestrianState:
    return PedestrianState(
        id=pid, position=Vec2(*pos), velocity=Vec2(*vel), goal=Vec2(*goal), **kw
    )


PARAMS = SfmParams()


class TestSfmForce:
    def test_lone_pedestrian_at_rest(self):
        # goal relaxation only: desired_speed / tau eastward
        f = sfm_force(ped(desired_speed=1.2), [], None, [], SfmParams(relaxation_time=0.5))
        assert f.x == pytest.approx(2.4)
        assert f.y == pytest.approx(0.0)

    def test_at_desired_velocity_force_vanishes(self):
        f = sfm_force(ped(vel=(1.2, 0.0), desired_speed=1.2), [], None, [], PARAMS)
        assert f.norm() == pytest.approx(0.0, abs=1e-12)

    def test_pair_repulsion_magnitude(self):
        # 1 m apart, radii 0.3: A * exp((0.6 - 1.0) / B)
        a = ped(0, pos=(0.0, 0.0), goal=(0.0, 0.0), vel=(0, 0))
        b = ped(1, pos=(1.0, 0.0), goal=(1.0, 0.0), vel=(0, 0))
        params = SfmParams(social_strength=2.1, social_range=0.3)
        f = sfm_force(a, [b], None, [], params)
        expected = 2.1 * math.exp((0.6 - 1.0) / 0.3)
        assert f.norm() == pytest.approx(expected, rel=1e-12)
        assert f.x == pytest.approx(-expected, rel=1e-12)  # pushed away from b

    def test_robot_counts_as_agent(self):
        a = ped(0, pos=(0.0, 0.0), goal=(0.0, 0.0))
        robot = RobotState(pose=Pose2(Vec2(1.0, 0.0), 0.0), twist=Twist(0, 0), radius=0.3)
        f = sfm_force(a, [], robot, [], PARAMS)
        expected = 2.1 * math.exp((0.6 - 1.0) / 0.3)
        assert f.x == pytest.approx(-expected, rel=1e-12)

    def test_wall_repulsion_points_away(self):
        a = ped(0, pos=(0.0, 0.5), goal=(0.0, 0.5))
        wall = Segment2(Vec2(-5, 0), Vec2(5, 0))
        f = sfm_force(a, [], None, [wall], PARAMS)
        assert f.y > 0.0
        assert f.x == pytest.approx(0.0, abs=1e-12)

    def test_coincident_centers_deterministic(self):
        a = ped(0, pos=(1.0, 1.0), goal=(1.0, 1.0))
        b = ped(1, pos=(1.0, 1.0), goal=(1.0, 1.0))
        f1 = sfm_force(a, [b], None, [], PARAMS)
        f2 = sfm_force(a, [b], None, [], PARAMS)
        assert f1 == f2
        assert f1.norm() > 0.0

    def test_positive_params_enforced(self):
        with pytest.raises(ValueError):
            SfmParams(relaxation_time=0.0)


class TestStepPedestrians:
    def test_zero_force_straight_line(self):
        p = ped(vel=(1.2, 0.0), desired_speed=1.2, goal=(100.0, 0.0))
        out = step_pedestrians([p], None, [], PARAMS, 0.1)[0]
        assert out.position.x == pytest.approx(0.12)
        assert out.position.y == pytest.approx(0.0)

    def test_goal_reached_stays_near_goal(self):
        p = ped(pos=(10.0, 0.0), vel=(0.0, 0.0), goal=(10.0, 0.0))
        peds = [p]
        for _ in range(100):
            peds = step_pedestrians(peds, None, [], PARAMS, 0.05)
        assert peds[0].position.distance_to(Vec2(10.0, 0.0)) < 0.3

    def test_head_on_pair_stays_mirror_symmetric(self):
        left = ped(0, pos=(-2.0, 0.0), vel=(1.2, 0.0), goal=(2.0, 0.0))
        right = ped(1, pos=(2.0, 0.0), vel=(-1.2, 0.0), goal=(-2.0, 0.0))
        peds = [left, right]
        for _ in range(60):
            peds = step_pedestrians(peds, None, [], PARAMS, 0.05)
            a, b = peds
            assert a.position.x == pytest.approx(-b.position.x, abs=1e-6)
            assert a.position.y == pytest.approx(b.position.y, abs=1e-6)
            assert a.velocity.x == pytest.approx(-b.velocity.x, abs=1e-6)

    def test_speed_cap_never_exceeded(self):
        # crowd blast: peds stacked close for strong forces
        peds = [
            ped(i, pos=(0.2 * i, 0.0), vel=(0.0, 0.0), goal=(10.0 * (-1) ** i, 0.0), desired_speed=1.0)
            for i in range(5)
        ]
        for _ in range(50):
            peds = step_pedestrians(peds, None, [], PARAMS, 0.05)
            for p in peds:
                assert p.velocity.norm() <= 1.3 * p.desired_speed + 1e-12

    def test_converges_to_desired_speed(self):
        p = ped(vel=(0.0, 0.0), desired_speed=1.2, goal=(100.0, 0.0))
        params = SfmParams(relaxation_time=0.5)
        peds = [p]
        for _ in range(int(5 * 0.5 / 0.05)):  # 5 tau
            peds = step_pedestrians(peds, None, [], params, 0.05)
        assert peds[0].velocity.norm() == pytest.approx(1.2, rel=0.01)

    def test_route_advances_on_arrival(self):
        a, b = Vec2(0.0, 0.0), Vec2(3.0, 0.0)
        p = ped(pos=(2.9, 0.0), vel=(1.2, 0.0), goal=(3.0, 0.0)).__class__(
            id=0, position=Vec2(2.9, 0.0), velocity=Vec2(1.2, 0.0), goal=b,
            route=(b, a), route_index=0,
        )
        out = step_pedestrians([p], None, [], PARAMS, 0.05)[0]
        assert out.goal == a
        assert out.route_index == 1

    def test_determinism(self):
        peds = [
            ped(i, pos=(i, 0.3 * i), vel=(0.1, -0.2), goal=(5 - i, 2.0))
            for i in range(4)
        ]
        robot = RobotState(pose=Pose2(Vec2(2.0, 1.0), 0.4), twist=Twist(0.5, 0.1))
        walls = [Segment2(Vec2(-5, -2), Vec2(10, -2))]
        run1 = run2 = peds
        for _ in range(40):
            run1 = step_pedestrians(run1, robot, walls, PARAMS, 0.05)
        for _ in range(40):
            run2 = step_pedestrians(run2, robot, walls, PARAMS, 0.05)
        assert run1 == run2
