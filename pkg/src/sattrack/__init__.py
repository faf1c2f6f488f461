"""Open-loop LEO satellite tracking with an alt-azimuth mount.

Simulates a latency-bound, trapezoidal-motion mount following a pass,
measures pointing error, and maps it to sub-THz pointing loss.
"""
__version__ = "0.1.0"

from .analysis import EcdfSeries, TraceSummary, ecdf, fraction_within, summarize
from .kinematics import MotionPlan, MountConfig, plan_move, position_at, velocity_at
from .link_budget import (AntennaConfig, LinkLosses, aperture_from_gain, far_field_ok,
                          pointing_loss, pointing_loss_db, pointing_loss_series,
                          received_power, roc)
from .optimizer import ApsConfig, OptimizationReport, aps_optimize, pattern_search, rmse
from .simulation import (PhaseLabel, SimulationTrace, TraceRecord, VelocityProfile,
                         pointing_error, profile_A, profile_B, simulate)
from .trajectory import (AngularSample, PassTrajectory, generate_synthetic_pass,
                         load_trajectory, max_axis_rates, sample_at, unwrap_azimuth,
                         write_trajectory)
