"""Hot inner loops, each with a numba kernel and a pure-numpy fallback.

``track_pass`` runs the command/move/wait state machine over the simulation
grid; ``window_range`` computes max - min over strided sliding windows. The
numba kernels walk the grid one step at a time; the numpy fallbacks loop per
command cycle (or not at all) and fill whole segments with vector ops. Both
produce the same arrays; which one runs is chosen by ``_accel.USE_NUMBA``.
"""
import math

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from . import _accel
from .kinematics import MotionPlan, position_at, trapezoid_times, travel_at

WAIT, LATENCY, MOVE_AZ, MOVE_EL = 0, 1, 2, 3

# absorbs float noise in duration / step before rounding up to the grid
_GRID_EPS = 1e-9


def grid_steps(duration, step):
    """Number of simulation steps covering ``duration``, rounded up."""
    if duration <= 0.0:
        return 0
    return int(math.ceil(duration / step - _GRID_EPS))


_trapezoid_times_jit = _accel.njit(trapezoid_times)
_travel_at_jit = _accel.njit(travel_at)
_grid_steps_jit = _accel.njit(grid_steps)


@_accel.njit
def _track_pass_steps(t_grid, traj_t, traj_az, traj_el, az0, el0,
                      v_az, v_el, a_az, a_el, n_lat, n_dt, dt, step, el_first):
    n = t_grid.shape[0]
    t_end = traj_t[traj_t.shape[0] - 1]
    m_az = np.empty(n)
    m_el = np.empty(n)
    phase = np.empty(n, np.int8)
    cmds = np.empty(n, np.int64)
    n_cmd = 0
    cur_az = az0
    cur_el = el0
    k = 0
    while k < n:
        k_cmd = k
        cmds[n_cmd] = k
        n_cmd += 1
        tt = min(t_grid[k] + dt, t_end)
        tgt_az = np.interp(tt, traj_t, traj_az)
        tgt_el = np.interp(tt, traj_t, traj_el)

        stop = min(k + n_lat, n)
        while k < stop:
            m_az[k] = cur_az
            m_el[k] = cur_el
            phase[k] = LATENCY
            k += 1

        for i in range(2):
            move_el = (i == 0) == el_first
            if move_el:
                start, target, v, a, code = cur_el, tgt_el, v_el, a_el, MOVE_EL
            else:
                start, target, v, a, code = cur_az, tgt_az, v_az, a_az, MOVE_AZ
            d = target - start
            sign = 1.0 if d > 0.0 else -1.0
            dist = abs(d)
            vp, t1, t2 = _trapezoid_times_jit(dist, v, a)
            total = 2.0 * t1 + t2
            for j in range(_grid_steps_jit(total, step)):
                if k >= n:
                    break
                tj = j * step
                if tj >= total:
                    pos = target
                else:
                    pos = start + sign * _travel_at_jit(dist, vp, a, t1, t2, tj)
                if move_el:
                    m_az[k] = cur_az
                    m_el[k] = pos
                else:
                    m_az[k] = pos
                    m_el[k] = cur_el
                phase[k] = code
                k += 1
            if move_el:
                cur_el = target
            else:
                cur_az = target

        stop = min(max(k_cmd + n_dt, k), n)
        while k < stop:
            m_az[k] = cur_az
            m_el[k] = cur_el
            phase[k] = WAIT
            k += 1
    return m_az, m_el, phase, cmds[:n_cmd].copy()


def _track_pass_cycles(t_grid, traj_t, traj_az, traj_el, az0, el0,
                       v_az, v_el, a_az, a_el, n_lat, n_dt, dt, step, el_first):
    n = t_grid.shape[0]
    t_end = traj_t[-1]
    m_az = np.empty(n)
    m_el = np.empty(n)
    phase = np.empty(n, np.int8)
    cmds = []
    cur = {"az": az0, "el": el0}
    limits = {"az": (v_az, a_az, MOVE_AZ), "el": (v_el, a_el, MOVE_EL)}
    order = ("el", "az") if el_first else ("az", "el")
    k = 0
    while k < n:
        k_cmd = k
        cmds.append(k)
        tt = min(t_grid[k] + dt, t_end)
        target = {"az": np.interp(tt, traj_t, traj_az),
                  "el": np.interp(tt, traj_t, traj_el)}

        stop = min(k + n_lat, n)
        m_az[k:stop] = cur["az"]
        m_el[k:stop] = cur["el"]
        phase[k:stop] = LATENCY
        k = stop

        for axis in order:
            v, a, code = limits[axis]
            d = target[axis] - cur[axis]
            vp, t1, t2 = trapezoid_times(abs(d), v, a)
            plan = MotionPlan(cur[axis], target[axis], 1 if d > 0 else -1, vp, a, t1, t2)
            stop = min(k + grid_steps(plan.duration, step), n)
            pos = position_at(plan, np.arange(stop - k) * step)
            if axis == "az":
                m_az[k:stop] = pos
                m_el[k:stop] = cur["el"]
            else:
                m_az[k:stop] = cur["az"]
                m_el[k:stop] = pos
            phase[k:stop] = code
            k = stop
            cur[axis] = target[axis]

        stop = min(max(k_cmd + n_dt, k), n)
        m_az[k:stop] = cur["az"]
        m_el[k:stop] = cur["el"]
        phase[k:stop] = WAIT
        k = stop
    return m_az, m_el, phase, np.array(cmds, dtype=np.int64)


def track_pass(*args, use_numba=None):
    """Run the tracking state machine; see ``simulation.simulate``.

    Returns ``(mount_az, mount_el, phase_codes, command_step_indices)``.
    """
    if use_numba is None:
        use_numba = _accel.USE_NUMBA
    if use_numba:
        return _track_pass_steps(*args)
    return _track_pass_cycles(*args)


@_accel.njit
def _window_range_loop(x, n_w, n_s):
    # monotone deques of indices give the running max and min in O(n)
    n = x.shape[0]
    n_out = (n - n_w) // n_s + 1
    out = np.empty(n_out)
    qmax = np.empty(n, np.int64)
    qmin = np.empty(n, np.int64)
    hmax = tmax = hmin = tmin = 0
    for j in range(n):
        v = x[j]
        while tmax > hmax and x[qmax[tmax - 1]] <= v:
            tmax -= 1
        qmax[tmax] = j
        tmax += 1
        while tmin > hmin and x[qmin[tmin - 1]] >= v:
            tmin -= 1
        qmin[tmin] = j
        tmin += 1
        s = j - n_w + 1
        if s < 0 or s % n_s != 0:
            continue
        while qmax[hmax] < s:
            hmax += 1
        while qmin[hmin] < s:
            hmin += 1
        out[s // n_s] = x[qmax[hmax]] - x[qmin[hmin]]
    return out


def _window_range_numpy(x, n_w, n_s):
    win = sliding_window_view(x, n_w)[::n_s]
    with np.errstate(invalid="ignore"):  # inf - inf windows give nan, as in the loop
        return win.max(axis=1) - win.min(axis=1)


def window_range(x, n_w, n_s, use_numba=None):
    """``max - min`` of ``x`` over windows of ``n_w`` samples every ``n_s``."""
    x = np.ascontiguousarray(x, dtype=float)
    if n_w < 1 or n_s < 1 or n_w > x.size:
        raise ValueError(f"bad window: n_w={n_w}, n_s={n_s}, len={x.size}")
    if use_numba is None:
        use_numba = _accel.USE_NUMBA
    if use_numba:
        return _window_range_loop(x, n_w, n_s)
    return _window_range_numpy(x, n_w, n_s)
