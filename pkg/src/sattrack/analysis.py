"""Empirical distributions and summary statistics of pointing-error traces."""
from dataclasses import dataclass
from typing import Dict, NamedTuple

import numpy as np

from .io import format_key_values
from .simulation import PhaseLabel


class EcdfSeries(NamedTuple):
    x: np.ndarray
    F: np.ndarray

    def __call__(self, value):
        """Right-continuous step evaluation F(value)."""
        idx = np.searchsorted(self.x, value, side="right")
        return np.where(idx == 0, 0.0, self.F[np.maximum(idx - 1, 0)])


def _as_values(values) -> np.ndarray:
    v = np.asarray(values, dtype=float).ravel()
    if v.size == 0:
        raise ValueError("empty input")
    if not np.all(np.isfinite(v)):
        raise ValueError("values must be finite")
    return v


def ecdf(values) -> EcdfSeries:
    """Empirical CDF at the unique sample values: F(x_i) = #(v <= x_i) / n."""
    v = _as_values(values)
    x, counts = np.unique(v, return_counts=True)
    F = np.cumsum(counts) / v.size
    F[-1] = 1.0
    return EcdfSeries(x, F)


def fraction_within(values, threshold: float) -> float:
    v = np.asarray(values, dtype=float).ravel()
    if v.size == 0:
        raise ValueError("empty input")
    return float(np.count_nonzero(v <= threshold)) / v.size


def nearest_rank(values, q: float) -> float:
    """Nearest-rank percentile: the ceil(q/100 * n)-th smallest value."""
    return float(np.percentile(_as_values(values), q, method="inverted_cdf"))


@dataclass(frozen=True)
class TraceSummary:
    max: float
    mean: float
    rmse: float
    p50: float
    p90: float
    p99: float
    phase_fractions: Dict[str, float]
    n_records: int

    def as_dict(self) -> Dict[str, object]:
        out = {
            "records": self.n_records,
            "max_error_deg": self.max,
            "mean_error_deg": self.mean,
            "rmse_deg": self.rmse,
            "p50_error_deg": self.p50,
            "p90_error_deg": self.p90,
            "p99_error_deg": self.p99,
        }
        for name, frac in self.phase_fractions.items():
            out[f"fraction_{name}"] = frac
        return out

    def to_text(self) -> str:
        return format_key_values(self.as_dict())


def summarize(trace) -> TraceSummary:
    err = np.asarray(trace.pointing_error, dtype=float)
    if err.size == 0:
        raise ValueError("cannot summarise an empty trace")
    phase = np.asarray(trace.phase)
    fractions = {p.name: float(np.count_nonzero(phase == int(p))) / err.size
                 for p in PhaseLabel}
    return TraceSummary(
        max=float(err.max()),
        mean=float(err.mean()),
        rmse=float(np.sqrt(np.mean(err * err))),
        p50=nearest_rank(err, 50),
        p90=nearest_rank(err, 90),
        p99=nearest_rank(err, 99),
        phase_fractions=fractions,
        n_records=int(err.size),
    )
