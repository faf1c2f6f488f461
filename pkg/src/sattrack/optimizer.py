"""Adaptive pattern search over per-axis target velocities.

Each iteration probes the four coordinate neighbours of the current point at
distance ``step`` (+az, -az, +el, -el), moves to the best one that strictly
improves the objective, and halves ``step`` when none does.
"""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from .io import write_csv, write_key_values
from .kinematics import MountConfig
from .simulation import VelocityProfile, profile_B, simulate
from .trajectory import PassTrajectory

# an improvement must beat the incumbent by more than this
IMPROVEMENT_TOL = 1e-12

Point = Tuple[float, float]


@dataclass(frozen=True)
class ApsConfig:
    initial_step: float = 2.0
    min_step: float = 0.1
    max_iterations: int = 20
    lower_bound: float = 0.1
    bounds: Optional[Tuple[Point, Point]] = None  # ((az_lo, az_hi), (el_lo, el_hi))
    initial_point: Optional[Point] = None
    workers: int = 1

    def __post_init__(self):
        if not 0 < self.min_step < self.initial_step:
            raise ValueError("need 0 < min_step < initial_step")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if not self.lower_bound > 0:
            raise ValueError("lower_bound must be positive")


@dataclass
class HistoryEntry:
    iteration: int
    v_az: float
    v_el: float
    rmse: float
    accepted: bool


@dataclass
class OptimizationReport:
    best_profile: VelocityProfile
    best_rmse: float
    iterations: int
    evaluations: int
    final_step: float
    history: List[HistoryEntry] = field(default_factory=list)

    def summary(self) -> Dict[str, object]:
        return {
            "v_az": self.best_profile.v_az,
            "v_el": self.best_profile.v_el,
            "rmse_deg": self.best_rmse,
            "iterations": self.iterations,
            "evaluations": self.evaluations,
            "final_step": self.final_step,
        }

    def write(self, report_path, history_path) -> None:
        write_key_values(report_path, self.summary())
        h = self.history
        write_csv(history_path, ("iter", "v_az", "v_el", "rmse_deg", "accepted"),
                  ([e.iteration for e in h], [e.v_az for e in h], [e.v_el for e in h],
                   [e.rmse for e in h], [str(int(e.accepted)) for e in h]))


def rmse(trace) -> float:
    """Root-mean-square pointing error (deg) over all trace records."""
    err = np.asarray(trace.pointing_error, dtype=float)
    if err.size == 0:
        raise ValueError("rmse of an empty trace")
    return float(np.sqrt(np.mean(err * err)))


class CandidateError(RuntimeError):
    def __init__(self, point, cause):
        super().__init__(f"objective failed at v=({point[0]:g}, {point[1]:g}) deg/s: {cause}")
        self.point = point


def pattern_search(objective: Callable[[Point], float], x0: Point,
                   bounds: Tuple[Point, Point], initial_step: float = 2.0,
                   min_step: float = 0.1, max_iterations: int = 20,
                   workers: int = 1):
    """Minimise ``objective`` over a 2-D box by coordinate pattern search.

    Returns ``(best_point, best_value, iterations, evaluations, final_step,
    history)``. Evaluations are cached per point; ``history`` lists every
    distinct evaluation as ``HistoryEntry`` in evaluation order.
    """
    (az_lo, az_hi), (el_lo, el_hi) = bounds
    cache: Dict[Point, float] = {}
    history: List[HistoryEntry] = []

    def clamp(p):
        return (min(max(p[0], az_lo), az_hi), min(max(p[1], el_lo), el_hi))

    def evaluate(points, iteration):
        todo = [p for p in dict.fromkeys(points) if p not in cache]
        if workers > 1 and len(todo) > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                futures = [pool.submit(objective, p) for p in todo]
                results = []
                for p, fut in zip(todo, futures):
                    try:
                        results.append(fut.result())
                    except Exception as exc:
                        raise CandidateError(p, exc) from exc
        else:
            results = []
            for p in todo:
                try:
                    results.append(objective(p))
                except Exception as exc:
                    raise CandidateError(p, exc) from exc
        for p, val in zip(todo, results):
            cache[p] = float(val)
            history.append(HistoryEntry(iteration, p[0], p[1], float(val), False))
        return [cache[p] for p in points]

    x = clamp((float(x0[0]), float(x0[1])))
    (fx,) = evaluate([x], 0)
    history[-1].accepted = True
    step = float(initial_step)
    iterations = 0
    while step >= min_step and iterations < max_iterations:
        iterations += 1
        candidates = [clamp((x[0] + step, x[1])), clamp((x[0] - step, x[1])),
                      clamp((x[0], x[1] + step)), clamp((x[0], x[1] - step))]
        candidates = [c for c in candidates if c != x]
        values = evaluate(candidates, iterations)
        best = None
        for c, val in zip(candidates, values):
            # first strictly-best wins ties, so the fixed probe order decides
            if val < fx - IMPROVEMENT_TOL and (best is None or val < best[1]):
                best = (c, val)
        if best is None:
            step *= 0.5
        else:
            x, fx = best
            for e in reversed(history):
                if (e.v_az, e.v_el) == x:
                    e.accepted = True
                    break
    return x, fx, iterations, len(cache), step, history


def aps_optimize(traj: PassTrajectory, cfg: MountConfig,
                 aps: ApsConfig = ApsConfig()) -> OptimizationReport:
    """Search per-axis velocities minimising the pass RMSE pointing error.

    Starts from the satellite's peak axis rates (profile B) clamped into the
    bounds, which default to ``[aps.lower_bound, v_max]`` per axis.
    """
    bounds = aps.bounds or ((aps.lower_bound, cfg.v_max_az),
                            (aps.lower_bound, cfg.v_max_el))
    if aps.initial_point is not None:
        x0 = aps.initial_point
    else:
        b = profile_B(traj)
        x0 = (b.v_az, b.v_el)

    def objective(p):
        return rmse(simulate(traj, cfg, VelocityProfile("C", p[0], p[1])))

    x, fx, iters, evals, step, history = pattern_search(
        objective, x0, bounds, aps.initial_step, aps.min_step,
        aps.max_iterations, aps.workers)
    return OptimizationReport(VelocityProfile("C", x[0], x[1]), fx, iters, evals,
                              step, history)
