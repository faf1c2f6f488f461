"""Satellite pass trajectories in the mount frame (azimuth, elevation).

Azimuth is kept *unwrapped*: a pass that crosses north runs 359 -> 361
instead of 359 -> 1, so the mount never sees an artificial 360 degree slew.
Files on disk always hold wrapped azimuth in [0, 360).
"""
import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import NamedTuple, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import bisect

EARTH_RADIUS_KM = 6371.0
MU_EARTH_KM3_S2 = 398600.4418

TRAJECTORY_COLUMNS = ("time_s", "az_deg", "el_deg")


class TrajectoryError(ValueError):
    """Raised for malformed or physically invalid trajectory input."""


class AngularSample(NamedTuple):
    t: float
    az: float
    el: float


@dataclass(frozen=True, eq=False)
class PassTrajectory:
    """Time-ordered azimuth/elevation samples of one pass.

    ``t`` is seconds from pass start, ``az`` is unwrapped degrees, ``el`` is
    degrees in [0, 90]. ``step`` is the nominal (median) sample spacing.
    Arrays are made read-only on construction.
    """

    t: np.ndarray
    az: np.ndarray
    el: np.ndarray
    step: float
    name: str = field(default="")

    def __post_init__(self):
        t = np.array(self.t, dtype=float)
        az = np.array(self.az, dtype=float)
        el = np.array(self.el, dtype=float)
        _validate(t, az, el)
        for arr in (t, az, el):
            arr.setflags(write=False)
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "az", az)
        object.__setattr__(self, "el", el)

    @classmethod
    def from_arrays(cls, t, az, el, name="", unwrap=True):
        """Build a trajectory, unwrapping ``az`` first unless told otherwise."""
        t = np.asarray(t, dtype=float)
        az = np.asarray(az, dtype=float)
        if unwrap:
            az = unwrap_azimuth(np.mod(az, 360.0))
        if t.size >= 2:
            step = float(np.median(np.diff(t)))
        else:
            step = float("nan")
        return cls(t, az, el, step, name)

    @property
    def samples(self):
        return [AngularSample(float(a), float(b), float(c))
                for a, b, c in zip(self.t, self.az, self.el)]

    @property
    def start(self) -> float:
        return float(self.t[0])

    @property
    def end(self) -> float:
        return float(self.t[-1])

    @property
    def duration(self) -> float:
        return self.end - self.start

    def __len__(self):
        return self.t.size


def _validate(t, az, el):
    if t.ndim != 1 or not (t.shape == az.shape == el.shape):
        raise TrajectoryError("t, az and el must be 1-D arrays of equal length")
    if t.size < 2:
        raise TrajectoryError(f"trajectory needs at least 2 samples, got {t.size}")
    if not (np.all(np.isfinite(t)) and np.all(np.isfinite(az)) and np.all(np.isfinite(el))):
        raise TrajectoryError("trajectory contains non-finite values")
    if t[0] < 0:
        raise TrajectoryError(f"time must be >= 0, got {t[0]}")
    bad = np.flatnonzero(np.diff(t) <= 0)
    if bad.size:
        i = int(bad[0]) + 1
        raise TrajectoryError(
            f"non-monotone time at sample {i}: {t[i]} follows {t[i - 1]}")
    bad = np.flatnonzero((el < 0) | (el > 90))
    if bad.size:
        i = int(bad[0])
        raise TrajectoryError(f"elevation out of [0, 90] at sample {i}: {el[i]}")
    jumps = np.abs(np.diff(az))
    if np.any(jumps > 180.0):
        i = int(np.argmax(jumps > 180.0)) + 1
        raise TrajectoryError(
            f"azimuth not unwrapped at sample {i}: jump of {jumps[i - 1]:.6g} deg")


def unwrap_azimuth(raw_az: Sequence[float]) -> np.ndarray:
    """Remove 360 degree jumps so successive differences are at most 180.

    The first value is kept as-is; every output is congruent to its input
    mod 360. A jump of exactly 180 degrees is left alone.
    """
    raw = np.asarray(raw_az, dtype=float)
    if raw.size == 0:
        raise ValueError("unwrap_azimuth needs a nonempty sequence")
    return np.unwrap(raw, period=360.0)


def sample_at(traj: PassTrajectory, t):
    """Linearly interpolated (az, el) at time ``t`` (scalar or array)."""
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < traj.t[0]) or np.any(t_arr > traj.t[-1]):
        raise ValueError(
            f"t outside trajectory span [{traj.t[0]}, {traj.t[-1]}]: {t}")
    az = np.interp(t_arr, traj.t, traj.az)
    el = np.interp(t_arr, traj.t, traj.el)
    if t_arr.ndim == 0:
        return float(az), float(el)
    return az, el


def max_axis_rates(traj: PassTrajectory) -> Tuple[float, float]:
    """Peak |d az/dt| and |d el/dt| from consecutive-sample differences."""
    dt = np.diff(traj.t)
    v_az = np.abs(np.diff(traj.az)) / dt
    v_el = np.abs(np.diff(traj.el)) / dt
    return float(v_az.max()), float(v_el.max())


# --- file I/O ---------------------------------------------------------------

def load_trajectory(path, columns: Sequence[str] = TRAJECTORY_COLUMNS,
                    delimiter: str = ",") -> PassTrajectory:
    """Read a trajectory CSV with a header row.

    ``columns`` names the (time, azimuth, elevation) header fields. Azimuth is
    reduced mod 360 and unwrapped on load.
    """
    path = Path(path)
    if len(columns) != 3:
        raise ValueError("columns must name (time, azimuth, elevation)")
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh, delimiter=delimiter)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise TrajectoryError(f"{path}: empty file") from None
        try:
            idx = [header.index(c) for c in columns]
        except ValueError:
            raise TrajectoryError(
                f"{path}: header {header} lacks columns {list(columns)}") from None
        rows = []
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not cell.strip() for cell in row):
                continue
            vals = []
            for name, i in zip(columns, idx):
                try:
                    vals.append(float(row[i]))
                except (IndexError, ValueError):
                    cell = row[i] if i < len(row) else "<missing>"
                    raise TrajectoryError(
                        f"{path}: row {lineno}, column '{name}': "
                        f"cannot parse {cell!r}") from None
            rows.append(vals)
    if len(rows) < 2:
        raise TrajectoryError(f"{path}: need at least 2 data rows, got {len(rows)}")
    data = np.array(rows)
    t, az, el = data[:, 0], data[:, 1], data[:, 2]
    bad = np.flatnonzero(np.diff(t) <= 0)
    if bad.size:
        i = int(bad[0])
        raise TrajectoryError(
            f"{path}: non-monotone time at row {i + 3}: {t[i + 1]} after {t[i]}")
    return PassTrajectory.from_arrays(t, az, el, name=path.stem)


def write_trajectory(traj: PassTrajectory, path) -> None:
    from .io import atomic_write, fmt

    lines = [",".join(TRAJECTORY_COLUMNS)]
    for t, az, el in zip(traj.t, np.mod(traj.az, 360.0), traj.el):
        lines.append(f"{fmt(t)},{fmt(az)},{fmt(el)}")
    atomic_write(path, "\n".join(lines) + "\n")


# --- synthetic passes -------------------------------------------------------

def _peak_elevation(offset_rad: float, ratio: float) -> float:
    """Culmination elevation (deg) for ground-track offset ``offset_rad``.

    ``ratio`` is R_E / (R_E + h).
    """
    return math.degrees(math.atan2(math.cos(offset_rad) - ratio, math.sin(offset_rad)))


def _horizon_central_angle(min_el_deg: float, ratio: float) -> float:
    """Earth central angle (rad) at which the satellite sits at ``min_el_deg``."""
    e = math.radians(min_el_deg)
    return math.pi / 2 - e - math.asin(ratio * math.cos(e))


def generate_synthetic_pass(peak_el: float, altitude: float = 420.0,
                            sample_step: float = 1.0, min_el: float = 10.0,
                            name: Optional[str] = None) -> PassTrajectory:
    """Overhead pass of a circular orbit over a non-rotating spherical Earth.

    ``altitude`` is in km. The ground-track offset is found by bisection so the
    culmination elevation equals ``peak_el``; the pass is sampled every
    ``sample_step`` seconds, symmetric about culmination, and clipped to
    elevations >= ``min_el``.
    """
    if not 0.0 < peak_el <= 90.0:
        raise ValueError(f"peak_el must be in (0, 90], got {peak_el}")
    if altitude <= 0:
        raise ValueError(f"altitude must be positive, got {altitude}")
    if not 0.0 <= min_el < peak_el:
        raise ValueError(f"min_el must be in [0, peak_el), got {min_el}")
    if sample_step <= 0:
        raise ValueError(f"sample_step must be positive, got {sample_step}")

    radius = EARTH_RADIUS_KM + altitude
    ratio = EARTH_RADIUS_KM / radius
    omega = math.sqrt(MU_EARTH_KM3_S2 / radius ** 3)
    horizon = math.acos(ratio)

    if peak_el == 90.0:
        offset = 0.0
    else:
        f = lambda b: _peak_elevation(b, ratio) - peak_el  # noqa: E731
        if not f(0.0) > 0 > f(horizon):
            raise ValueError(
                f"peak elevation {peak_el} unreachable at altitude {altitude} km")
        offset = bisect(f, 0.0, horizon, xtol=1e-12, maxiter=200)
        if abs(f(offset)) > 0.01:
            raise ValueError(f"offset solve failed for peak elevation {peak_el}")

    # cos(psi) = cos(offset) * cos(u) on the right spherical triangle
    psi_min = _horizon_central_angle(min_el, ratio)
    cos_u = math.cos(psi_min) / math.cos(offset)
    u_max = math.acos(min(cos_u, 1.0))
    half = u_max / omega
    n = int(math.floor(half / sample_step + 1e-9))
    if n < 1:
        raise ValueError("pass too short for the requested sample step")
    tau = np.arange(-n, n + 1) * sample_step
    u = omega * tau

    # Local frame at the station: x east, y north, z up (unit Earth radius).
    # The sub-satellite track passes `offset` east of zenith, heading north.
    sx = np.full_like(u, math.sin(offset)) * np.cos(u)
    sy = np.sin(u)
    sz = math.cos(offset) * np.cos(u)
    east = radius * sx
    north = radius * sy
    up = radius * sz - EARTH_RADIUS_KM
    el = np.degrees(np.arctan2(up, np.hypot(east, north)))
    az = np.mod(np.degrees(np.arctan2(east, north)), 360.0)
    if offset == 0.0:
        # zenith is a singular point: hold the incoming azimuth there
        az[n] = az[n - 1]
    el = np.clip(el, 0.0, 90.0)
    t = tau - tau[0]
    if name is None:
        name = f"synthetic_el{peak_el:g}_h{altitude:g}"
    return PassTrajectory.from_arrays(t, az, el, name=name)
