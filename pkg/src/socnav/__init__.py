"""Deterministic 2D shared-autonomy navigation simulator.

A telepresence robot driven through a pedestrian-populated hall by a
scripted or live operator, with a velocity-obstacle assistance engine that
renders its optimal command as haptic forces and visual guidance cues, plus
the objective metrics to evaluate the result.
"""

from .assistance import AssistanceOutput, AssistParams, Condition, guidance_visuals, haptic_force
from .engine import TrialResult, run_trial
from .geometry import Pose2, Segment2, Vec2, disc_segment_distance, ray_disc_intersects, wrap_angle
from .metrics import TickRecord, TrialMetrics, compute_metrics, count_intrusions, mean_disagreement, path_length
from .pedestrians import PedestrianState, SfmParams, sfm_force, step_pedestrians
from .policies import CompliantPolicy, GoalSeekPolicy, LivePolicy, NoisyGoalSeekPolicy, OperatorPolicy, ReplayPolicy
from .robot import MotionLimits, RobotState, StickInput, Twist, map_input, predict_trajectory, step, twist_to_planar_velocity
from .rvo import RvoContext, RvoDecision, RvoParams, RvoWeights, VelocityCone, build_cones, filter_static, in_any_cone, optimal_velocity, sample_controls
from .scenarios import ConfigurationError, PedConfig, ScenarioConfig, WorldState, build_scenario, hall_walls

__version__ = "0.1.0"
