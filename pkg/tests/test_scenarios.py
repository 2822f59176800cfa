import math

import pytest

from socnav.geometry import Segment2, Vec2
from socnav.scenarios import (
    ConfigurationError,
    PedConfig,
    ScenarioConfig,
    build_scenario,
    hall_walls,
    max_goal_velocity,
)


class TestHallWalls:
    @pytest.mark.parametrize("layout", ["hall_a", "hall_b"])
    def test_boundary_plus_tables(self, layout):
        walls = hall_walls(layout)
        assert len(walls) % 4 == 0
        assert len(walls) >= 8  # boundary + at least one table

    def test_layouts_differ(self):
        assert hall_walls("hall_a") != hall_walls("hall_b")

    def test_unknown_layout(self):
        with pytest.raises(ConfigurationError):
            hall_walls("ballroom")


class TestBuildScenario:
    def test_empty_hall(self):
        world = build_scenario(ScenarioConfig(ped_count=0))
        assert world.pedestrians == []
        assert len(world.walls) >= 8
        assert world.robot.position == Vec2(1.5, 5.0)

    def test_determinism_bitwise(self):
        cfg = ScenarioConfig(ped_config=PedConfig.RANDOM, ped_count=8, seed=99)
        w1 = build_scenario(cfg)
        w2 = build_scenario(cfg)
        assert w1.robot == w2.robot
        assert w1.pedestrians == w2.pedestrians
        assert w1.walls == w2.walls

    def test_seeds_differ(self):
        a = build_scenario(ScenarioConfig(seed=1)).pedestrians
        b = build_scenario(ScenarioConfig(seed=2)).pedestrians
        assert a != b

    @pytest.mark.parametrize("layout", ["hall_a", "hall_b"])
    @pytest.mark.parametrize("ped_config", list(PedConfig))
    def test_spawn_constraints(self, layout, ped_config):
        cfg = ScenarioConfig(layout=layout, ped_config=ped_config, ped_count=6, seed=3)
        world = build_scenario(cfg)
        assert len(world.pedestrians) == 6
        from socnav.geometry import disc_segment_distance

        for ped in world.pedestrians:
            assert min(disc_segment_distance(ped.position, w) for w in world.walls) >= 1.0 - 1e-9
            assert ped.position.distance_to(world.robot.position) >= 1.5 - 1e-9

    def test_crossing_goal_vectors_perpendicular(self):
        cfg = ScenarioConfig(ped_config=PedConfig.CROSSING, ped_count=4, seed=7)
        world = build_scenario(cfg)
        corridor = world.goal - world.robot.position
        for ped in world.pedestrians:
            to_goal = ped.goal - ped.position
            cos = corridor.dot(to_goal) / (corridor.norm() * to_goal.norm())
            angle = math.degrees(math.acos(max(-1.0, min(1.0, cos))))
            assert 75.0 <= angle <= 105.0

    def test_approach_counter_flow(self):
        cfg = ScenarioConfig(ped_config=PedConfig.APPROACH, ped_count=5, seed=11)
        world = build_scenario(cfg)
        for ped in world.pedestrians:
            assert ped.position.x > world.robot.position.x  # starts ahead
            assert ped.goal.x < world.robot.position.x + 0.5  # heads behind the start

    def test_overcrowded_raises(self):
        with pytest.raises(ConfigurationError):
            build_scenario(ScenarioConfig(ped_config=PedConfig.CROSSING, ped_count=200, seed=0))

    def test_goal_outside_hall_rejected(self):
        with pytest.raises(ConfigurationError):
            build_scenario(ScenarioConfig(goal=Vec2(40.0, 5.0), ped_count=0))

    def test_start_in_wall_rejected(self):
        wall_through_start = (Segment2(Vec2(1.5, 0.0), Vec2(1.5, 10.0)),)
        cfg = ScenarioConfig(walls=hall_walls("hall_a") + wall_through_start, ped_count=0)
        with pytest.raises(ConfigurationError):
            build_scenario(cfg)

    def test_dt_bounds(self):
        with pytest.raises(ConfigurationError):
            ScenarioConfig(dt=0.2)
        with pytest.raises(ConfigurationError):
            ScenarioConfig(dt=0.0)


class TestGoalVelocity:
    def test_magnitude_capped(self):
        v = max_goal_velocity(Vec2(0, 0), Vec2(10, 0), v_max=1.0)
        assert v == Vec2(1.0, 0.0)

    def test_zero_at_goal(self):
        assert max_goal_velocity(Vec2(3, 3), Vec2(3, 3), v_max=1.0) == Vec2(0.0, 0.0)

    def test_direction(self):
        v = max_goal_velocity(Vec2(1, 1), Vec2(1, 5), v_max=0.7)
        assert v.x == pytest.approx(0.0)
        assert v.y == pytest.approx(0.7)
