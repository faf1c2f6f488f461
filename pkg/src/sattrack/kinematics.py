"""Single-axis rest-to-rest moves under a trapezoidal velocity law.

A move accelerates at ``a`` up to ``v_peak``, cruises, then decelerates at
``a`` to a stop on the target. Moves too short to reach the commanded
velocity degenerate to a triangular profile with ``v_peak = sqrt(a * d)``.
"""
import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class MountConfig:
    """Hardware limits and timing of an alt-azimuth mount.

    Defaults are a mid-range mount: 10 deg/s, 20 deg/s^2 on both axes,
    100 ms command latency, 1 s command interval, 5 ms simulation step.
    """

    v_max_az: float = 10.0
    v_max_el: float = 10.0
    accel_az: float = 20.0
    accel_el: float = 20.0
    latency_l: float = 0.1
    command_interval_dt: float = 1.0
    sim_step: float = 0.005

    def __post_init__(self):
        for name in ("v_max_az", "v_max_el", "accel_az", "accel_el",
                     "latency_l", "command_interval_dt", "sim_step"):
            val = getattr(self, name)
            if not (math.isfinite(val) and val > 0):
                raise ValueError(f"MountConfig.{name} must be positive and finite, got {val}")
        if self.sim_step > self.latency_l:
            raise ValueError("sim_step must not exceed latency_l")
        if self.sim_step > self.command_interval_dt:
            raise ValueError("sim_step must not exceed command_interval_dt")


def trapezoid_times(distance, v, a):
    """Return ``(v_peak, t_ramp, t_cruise)`` for an unsigned ``distance``."""
    if distance <= 0.0:
        return 0.0, 0.0, 0.0
    if distance >= v * v / a:
        return v, v / a, (distance - v * v / a) / v
    v_peak = math.sqrt(a * distance)
    return v_peak, v_peak / a, 0.0


def travel_at(distance, v_peak, a, t_ramp, t_cruise, t):
    """Unsigned distance travelled ``t`` seconds into a move."""
    if t <= 0.0:
        return 0.0
    if t < t_ramp:
        return 0.5 * a * t * t
    if t < t_ramp + t_cruise:
        return 0.5 * a * t_ramp * t_ramp + v_peak * (t - t_ramp)
    if t < 2.0 * t_ramp + t_cruise:
        t3 = t - t_ramp - t_cruise
        return 0.5 * a * t_ramp * t_ramp + v_peak * t_cruise + v_peak * t3 - 0.5 * a * t3 * t3
    return distance


@dataclass(frozen=True)
class MotionPlan:
    start_pos: float
    target_pos: float
    direction: int
    v_peak: float
    a: float
    T_I: float
    T_II: float

    @property
    def T_III(self) -> float:
        return self.T_I

    @property
    def duration(self) -> float:
        return 2.0 * self.T_I + self.T_II

    @property
    def distance(self) -> float:
        return abs(self.target_pos - self.start_pos)

    @property
    def triangular(self) -> bool:
        return self.T_II == 0.0 and self.distance > 0.0


def plan_move(start: float, target: float, v: float, a: float) -> MotionPlan:
    """Plan a rest-to-rest move from ``start`` to ``target`` (degrees)."""
    if not v > 0:
        raise ValueError(f"velocity must be positive, got {v}")
    if not a > 0:
        raise ValueError(f"acceleration must be positive, got {a}")
    d = target - start
    v_peak, t1, t2 = trapezoid_times(abs(d), v, a)
    direction = 1 if d > 0 else (-1 if d < 0 else 0)
    return MotionPlan(float(start), float(target), direction, v_peak, float(a), t1, t2)


def position_at(plan: MotionPlan, t):
    """Mount position (deg) at time ``t`` into the move; scalar or array.

    At and after the end of the move the target is returned exactly.
    """
    t_arr = np.asarray(t, dtype=float)
    a, vp, t1, t2 = plan.a, plan.v_peak, plan.T_I, plan.T_II
    t3 = t_arr - t1 - t2
    travel = np.select(
        [t_arr <= 0.0, t_arr < t1, t_arr < t1 + t2, t_arr < 2.0 * t1 + t2],
        [0.0,
         0.5 * a * t_arr * t_arr,
         0.5 * a * t1 * t1 + vp * (t_arr - t1),
         0.5 * a * t1 * t1 + vp * t2 + vp * t3 - 0.5 * a * t3 * t3],
        default=plan.distance,
    )
    pos = plan.start_pos + plan.direction * travel
    pos = np.where(t_arr >= plan.duration, plan.target_pos, pos)
    return float(pos) if pos.ndim == 0 else pos


def velocity_at(plan: MotionPlan, t):
    """Signed mount velocity (deg/s) at time ``t`` into the move."""
    t_arr = np.asarray(t, dtype=float)
    a, vp, t1, t2 = plan.a, plan.v_peak, plan.T_I, plan.T_II
    speed = np.select(
        [t_arr <= 0.0, t_arr < t1, t_arr < t1 + t2, t_arr < 2.0 * t1 + t2],
        [0.0, a * t_arr, vp, vp - a * (t_arr - t1 - t2)],
        default=0.0,
    )
    vel = plan.direction * speed
    return float(vel) if np.ndim(vel) == 0 else vel
