"""Antenna aperture, pointing loss and received power for a sub-THz uplink.

Pointing loss grows as ``exp(pi * eta * A / lambda**2 * tan(err)**2)``. When
the aperture is derived from the gain, the exponent's prefactor collapses to
``G / 4``, so the loss depends only on gain and pointing error.
"""
import math
from dataclasses import dataclass
from typing import NamedTuple, Optional, Tuple

import numpy as np

from . import kernels

SPEED_OF_LIGHT = 299_792_458.0
DB_PER_NEPER_POWER = 10.0 * math.log10(math.e)


def db_to_linear(db):
    return 10.0 ** (np.asarray(db, dtype=float) / 10.0)


def linear_to_db(x):
    return 10.0 * np.log10(x)


def aperture_from_gain(gain_dbi: float, eta: float, frequency_hz: float) -> float:
    """Physical aperture (m^2) of an antenna with the given gain and efficiency."""
    if not 0.0 < eta <= 1.0:
        raise ValueError(f"aperture efficiency must be in (0, 1], got {eta}")
    if not frequency_hz > 0:
        raise ValueError(f"frequency must be positive, got {frequency_hz}")
    wavelength = SPEED_OF_LIGHT / frequency_hz
    return 10.0 ** (gain_dbi / 10.0) * wavelength ** 2 / (4.0 * math.pi * eta)


@dataclass(frozen=True)
class AntennaConfig:
    gain_dbi: float
    efficiency_eta: float
    frequency_hz: float
    hpbw_deg: Optional[float] = None  # label only

    def __post_init__(self):
        if not 0.0 < self.efficiency_eta <= 1.0:
            raise ValueError(f"efficiency must be in (0, 1], got {self.efficiency_eta}")
        if not self.frequency_hz > 0:
            raise ValueError(f"frequency must be positive, got {self.frequency_hz}")

    @property
    def gain_linear(self) -> float:
        return 10.0 ** (self.gain_dbi / 10.0)

    @property
    def wavelength_m(self) -> float:
        return SPEED_OF_LIGHT / self.frequency_hz

    @property
    def aperture_m2(self) -> float:
        return aperture_from_gain(self.gain_dbi, self.efficiency_eta, self.frequency_hz)

    @property
    def loss_coefficient(self) -> float:
        """Exponent prefactor of the pointing loss; G/4 for a gain-derived aperture."""
        return self.gain_linear / 4.0

    @property
    def label(self) -> str:
        if self.hpbw_deg is None:
            return f"{self.gain_dbi:g} dBi"
        return f"{self.gain_dbi:g} dBi / {self.hpbw_deg:g} deg"


def normalized_aperture(eta: float, aperture_m2: float, wavelength_m: float) -> float:
    """``pi * eta * A / lambda**2`` for an arbitrary aperture."""
    return math.pi * eta * aperture_m2 / wavelength_m ** 2


def _check_error_angle(alpha):
    if np.any(np.abs(alpha) >= 90.0):
        raise ValueError(f"pointing error must be below 90 deg, got {alpha}")


def pointing_loss(alpha_e_deg, antenna: AntennaConfig):
    """Linear pointing loss (>= 1) for pointing error ``alpha_e_deg``."""
    _check_error_angle(alpha_e_deg)
    x = antenna.loss_coefficient * np.tan(np.radians(alpha_e_deg)) ** 2
    out = np.exp(x)
    return float(out) if np.ndim(out) == 0 else out


def pointing_loss_db(alpha_e_deg, antenna: AntennaConfig):
    """Pointing loss in dB; evaluated without the exp/log round trip."""
    _check_error_angle(alpha_e_deg)
    x = antenna.loss_coefficient * np.tan(np.radians(alpha_e_deg)) ** 2
    out = DB_PER_NEPER_POWER * x
    return float(out) if np.ndim(out) == 0 else out


def pointing_loss_from_aperture(alpha_e_deg, eta: float, aperture_m2: float,
                                wavelength_m: float):
    """Linear pointing loss for an explicit aperture (not tied to a gain)."""
    _check_error_angle(alpha_e_deg)
    x = normalized_aperture(eta, aperture_m2, wavelength_m) * np.tan(np.radians(alpha_e_deg)) ** 2
    out = np.exp(x)
    return float(out) if np.ndim(out) == 0 else out


def far_field_ok(distance_m: float, gain_tx_linear: float, gain_rx_linear: float,
                 wavelength_m: float, margin: float = 100.0) -> Tuple[bool, float]:
    """Check the far-field condition behind the simplified loss law.

    Returns ``(ratio >= margin, ratio)`` with
    ``ratio = 8 sqrt(pi) d / (sqrt(Gt Gr) lambda)``.
    """
    ratio = 8.0 * math.sqrt(math.pi) * distance_m / (
        math.sqrt(gain_tx_linear * gain_rx_linear) * wavelength_m)
    return ratio >= margin, ratio


@dataclass(frozen=True)
class LinkLosses:
    spreading_db: float = 0.0
    absorption_db: float = 0.0
    pointing_db: float = 0.0

    def __post_init__(self):
        for name in ("spreading_db", "absorption_db", "pointing_db"):
            val = getattr(self, name)
            if not (math.isfinite(val) and val >= 0):
                raise ValueError(f"{name} must be finite and >= 0, got {val}")

    @property
    def total_db(self) -> float:
        return self.spreading_db + self.absorption_db + self.pointing_db


def received_power(p_t: float, losses: LinkLosses) -> float:
    """Received power (W) after spreading, absorption and pointing losses."""
    if not p_t > 0:
        raise ValueError(f"transmit power must be positive, got {p_t}")
    l_s, l_a, l_p = (float(db_to_linear(x)) for x in
                     (losses.spreading_db, losses.absorption_db, losses.pointing_db))
    return p_t / (l_s * l_a * l_p)


def received_power_db(p_t_db: float, losses: LinkLosses) -> float:
    """Received power in dB units of whatever ``p_t_db`` is referenced to."""
    return p_t_db - losses.spreading_db - losses.absorption_db - losses.pointing_db


class LossSeries(NamedTuple):
    t: np.ndarray
    lp_db: np.ndarray
    invalid: np.ndarray  # records with error >= 90 deg; lp_db is inf there


def pointing_loss_series(trace, antenna: AntennaConfig) -> LossSeries:
    """Pointing loss (dB) for every record of a simulation trace."""
    err = np.asarray(trace.pointing_error, dtype=float)
    invalid = np.abs(err) >= 90.0
    safe = np.where(invalid, 0.0, err)
    lp = DB_PER_NEPER_POWER * antenna.loss_coefficient * np.tan(np.radians(safe)) ** 2
    lp = np.where(invalid, np.inf, lp)
    return LossSeries(np.asarray(trace.t, dtype=float), lp, invalid)


def roc(t, lp_db, window_w: float = 1.0, step_s: float = 0.005, use_numba=None):
    """Pointing-loss rate of change over sliding windows.

    Each window spans ``window_w`` seconds (both end samples included) and
    windows start every ``step_s`` seconds. Returns ``(t_start, R)`` with
    ``R = (max - min) / window_w`` in dB/s; partial trailing windows are
    dropped.
    """
    t = np.asarray(t, dtype=float)
    lp = np.asarray(lp_db, dtype=float)
    if t.size != lp.size or t.size < 2:
        raise ValueError("roc needs matching t and lp series of length >= 2")
    dt = float(np.median(np.diff(t)))
    if not np.allclose(np.diff(t), dt, rtol=1e-6, atol=1e-9):
        raise ValueError("roc needs a uniformly sampled series")
    if window_w < dt:
        raise ValueError(f"window {window_w} s shorter than series step {dt} s")
    n_s = int(round(step_s / dt))
    if n_s < 1 or abs(n_s * dt - step_s) > 1e-6 * max(step_s, dt):
        raise ValueError(f"step {step_s} s is not a multiple of series step {dt} s")
    n_w = int(round(window_w / dt)) + 1
    if n_w > t.size:
        raise ValueError(
            f"window {window_w} s longer than series span {t[-1] - t[0]:g} s")
    r = kernels.window_range(lp, n_w, n_s, use_numba=use_numba) / window_w
    starts = t[: t.size - n_w + 1 : n_s]
    return starts, r
