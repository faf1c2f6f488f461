"""Discrete-time simulation of an open-loop alt-azimuth tracking controller.

Each command cycle goes LATENCY -> MOVE_AZ -> MOVE_EL -> WAIT. The command
issued at ``t_i`` targets the satellite position one command interval ahead;
the next command goes out at ``max(t_i + dt, move completion)`` because the
mount cannot queue commands.
"""
import csv
import logging
import math
from dataclasses import dataclass, replace
from enum import IntEnum
from pathlib import Path
from typing import NamedTuple, Optional, Tuple

import numpy as np

from . import kernels
from .kinematics import MountConfig
from .trajectory import PassTrajectory, max_axis_rates, sample_at

logger = logging.getLogger(__name__)

TRACE_COLUMNS = ("time_s", "sat_az_deg", "sat_el_deg", "mount_az_deg",
                 "mount_el_deg", "phase", "pointing_error_deg")


class PhaseLabel(IntEnum):
    WAIT = kernels.WAIT
    LATENCY = kernels.LATENCY
    MOVE_AZ = kernels.MOVE_AZ
    MOVE_EL = kernels.MOVE_EL


@dataclass(frozen=True)
class VelocityProfile:
    label: str
    v_az: float
    v_el: float

    def __post_init__(self):
        if not (self.v_az > 0 and self.v_el > 0):
            raise ValueError(
                f"profile {self.label}: velocities must be positive, "
                f"got ({self.v_az}, {self.v_el})")

    def clamped(self, cfg: MountConfig) -> "VelocityProfile":
        """Copy with each axis limited to the mount's maximum velocity."""
        v_az = min(self.v_az, cfg.v_max_az)
        v_el = min(self.v_el, cfg.v_max_el)
        if (v_az, v_el) != (self.v_az, self.v_el):
            logger.warning("profile %s clamped from (%g, %g) to (%g, %g) deg/s",
                           self.label, self.v_az, self.v_el, v_az, v_el)
            return replace(self, v_az=v_az, v_el=v_el)
        return self


def profile_A(cfg: MountConfig) -> VelocityProfile:
    """Mount maximum velocity on both axes."""
    return VelocityProfile("A", cfg.v_max_az, cfg.v_max_el)


def profile_B(traj: PassTrajectory) -> VelocityProfile:
    """Peak satellite rate on each axis."""
    v_az, v_el = max_axis_rates(traj)
    if v_az <= 0 or v_el <= 0:
        raise ValueError(
            f"profile B undefined: satellite rates ({v_az}, {v_el}) deg/s, "
            "target is stationary on at least one axis")
    return VelocityProfile("B", v_az, v_el)


class TraceRecord(NamedTuple):
    t: float
    sat_az: float
    sat_el: float
    mount_az: float
    mount_el: float
    phase: PhaseLabel
    pointing_error: float


def pointing_error(mount_az, mount_el, sat_az, sat_el):
    """Great-circle angle (deg) between mount boresight and satellite.

    Haversine form with elevation as latitude and azimuth as longitude.
    Works elementwise on arrays; azimuths may be any real value.
    """
    th_m = np.radians(mount_el)
    th_s = np.radians(sat_el)
    dphi = np.radians(np.mod(np.subtract(sat_az, mount_az), 360.0))
    h = (np.sin((th_s - th_m) * 0.5) ** 2
         + np.cos(th_m) * np.cos(th_s) * np.sin(dphi * 0.5) ** 2)
    out = np.degrees(2.0 * np.arcsin(np.sqrt(np.clip(h, 0.0, 1.0))))
    return float(out) if np.ndim(out) == 0 else out


@dataclass(frozen=True, eq=False)
class SimulationTrace:
    """Per-step simulation output, stored column-wise."""

    t: np.ndarray
    sat_az: np.ndarray
    sat_el: np.ndarray
    mount_az: np.ndarray
    mount_el: np.ndarray
    phase: np.ndarray
    pointing_error: np.ndarray
    command_steps: Optional[np.ndarray] = None
    config: Optional[MountConfig] = None
    profile: Optional[VelocityProfile] = None
    trajectory_name: str = ""

    def __len__(self):
        return self.t.size

    @property
    def step(self) -> float:
        if self.config is not None:
            return self.config.sim_step
        return float(np.median(np.diff(self.t)))

    @property
    def records(self):
        return [self.record(i) for i in range(len(self))]

    def record(self, i: int) -> TraceRecord:
        return TraceRecord(float(self.t[i]), float(self.sat_az[i]), float(self.sat_el[i]),
                           float(self.mount_az[i]), float(self.mount_el[i]),
                           PhaseLabel(int(self.phase[i])), float(self.pointing_error[i]))


def simulate(traj: PassTrajectory, cfg: MountConfig, profile: VelocityProfile,
             initial_mount: Optional[Tuple[float, float]] = None,
             elevation_first: bool = False, use_numba: Optional[bool] = None
             ) -> SimulationTrace:
    """Simulate tracking ``traj`` with ``profile`` velocities on mount ``cfg``.

    The grid runs from the first trajectory sample to the last at
    ``cfg.sim_step``. Look-ahead targets beyond the pass end are clamped to
    the final sample. ``initial_mount`` defaults to the satellite position at
    the first sample.
    """
    dt = cfg.command_interval_dt
    if traj.duration < 2.0 * dt:
        raise ValueError(
            f"trajectory spans {traj.duration:g} s, needs at least {2 * dt:g} s "
            f"(two command intervals)")
    profile = profile.clamped(cfg)
    step = cfg.sim_step
    n = int(math.floor(traj.duration / step + kernels._GRID_EPS)) + 1
    t_grid = traj.start + np.arange(n) * step
    t_grid[-1] = min(t_grid[-1], traj.end)
    sat_az, sat_el = sample_at(traj, t_grid)
    if initial_mount is None:
        az0, el0 = float(traj.az[0]), float(traj.el[0])
    else:
        az0, el0 = map(float, initial_mount)
        # same unwrapped branch as the pass, so the first move is not a 360 slew
        az0 += 360.0 * round((traj.az[0] - az0) / 360.0)

    m_az, m_el, phase, cmds = kernels.track_pass(
        t_grid, traj.t, traj.az, traj.el, az0, el0,
        profile.v_az, profile.v_el, cfg.accel_az, cfg.accel_el,
        kernels.grid_steps(cfg.latency_l, step), kernels.grid_steps(dt, step),
        dt, step, bool(elevation_first), use_numba=use_numba)

    err = pointing_error(m_az, m_el, sat_az, sat_el)
    return SimulationTrace(t_grid, sat_az, sat_el, m_az, m_el, phase, err,
                           command_steps=cmds, config=cfg, profile=profile,
                           trajectory_name=traj.name)


# --- trace CSV --------------------------------------------------------------

def write_trace(trace: SimulationTrace, path) -> None:
    """Write the trace CSV; azimuths are wrapped to [0, 360)."""
    from .io import atomic_write, fmt

    labels = {int(p): p.name for p in PhaseLabel}
    cols = (trace.t, np.mod(trace.sat_az, 360.0), trace.sat_el,
            np.mod(trace.mount_az, 360.0), trace.mount_el)
    lines = [",".join(TRACE_COLUMNS)]
    for i in range(len(trace)):
        lines.append(",".join([fmt(c[i]) for c in cols]
                              + [labels[int(trace.phase[i])], fmt(trace.pointing_error[i])]))
    atomic_write(path, "\n".join(lines) + "\n")


def load_trace(path) -> SimulationTrace:
    """Read a trace CSV written by ``write_trace``."""
    path = Path(path)
    codes = {p.name: int(p) for p in PhaseLabel}
    cols = {c: [] for c in TRACE_COLUMNS}
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        missing = set(TRACE_COLUMNS) - set(reader.fieldnames or ())
        if missing:
            raise ValueError(f"{path}: missing trace columns {sorted(missing)}")
        for lineno, row in enumerate(reader, start=2):
            try:
                for c in TRACE_COLUMNS:
                    cols[c].append(codes[row[c]] if c == "phase" else float(row[c]))
            except (KeyError, ValueError, TypeError):
                raise ValueError(f"{path}: row {lineno}: cannot parse {row}") from None
    if not cols["time_s"]:
        raise ValueError(f"{path}: trace has no records")
    arr = {c: np.array(v, dtype=np.int8 if c == "phase" else float) for c, v in cols.items()}
    return SimulationTrace(arr["time_s"], arr["sat_az_deg"], arr["sat_el_deg"],
                           arr["mount_az_deg"], arr["mount_el_deg"], arr["phase"],
                           arr["pointing_error_deg"], trajectory_name=path.stem)
