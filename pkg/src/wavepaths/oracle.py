"""Reference integration of the untransformed particle equations.

This module shares no formulas with the closed forms or the moving-frame
engine: it integrates

    dx/dt = cos(2 pi (x - t)) + shear z + c0,   dz/dt = 2 pi z sin(2 pi (x - t))

with an embedded Runge-Kutta 5(4) pair and classifies the sampled path by
looking at it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .errors import PeriodNotFound, SpanTooShort, ToleranceNotMet
from .model import FlowConfig, ParticleState, Shape, Trajectory, TrajectoryClass

TWO_PI = 2.0 * math.pi

UNBOUNDED_GROWTH = 1e3
DEFAULT_HORIZON = 10.0
X_DEAD_ZONE = 1e-9
MIN_CROSSING_ANGLE = 1e-6
# scipy's tolerances bound the estimated local error; the margin keeps the
# accumulated error of a forward-and-back run within a few multiples of tol
TOL_SAFETY = 0.1


def _rhs(config: FlowConfig):
    shear, c0 = config.shear, config.c0
    cos, sin = math.cos, math.sin

    def f(t, s):
        ph = TWO_PI * (s[0] - t)
        return [cos(ph) + shear * s[1] + c0, TWO_PI * s[1] * sin(ph)]

    return f


def propagate(config: FlowConfig, x: float, z: float, t0: float, t1: float, tol: float = 1e-10):
    """Carry the state ``(x, z)`` from time ``t0`` to ``t1`` (either direction)."""
    tol = TOL_SAFETY * tol
    sol = solve_ivp(_rhs(config), (t0, t1), [x, z], method="RK45", rtol=tol, atol=tol)
    if sol.status != 0:
        raise ToleranceNotMet(sol.message)
    return float(sol.y[0, -1]), float(sol.y[1, -1])


def integrate_raw(config: FlowConfig, init: ParticleState, t_max: float, tol: float = 1e-10,
                  t_eval=None, n_samples: int = 2001) -> Trajectory:
    """Adaptive RK45 solution sampled (via dense output) at ``t_eval``.

    ``tol`` bounds the local error per step, relative and absolute.
    Without ``t_eval`` the path is sampled at ``n_samples`` equidistant
    times on ``[0, t_max]``.
    """
    if not t_max > 0 or not tol > 0:
        raise ValueError("t_max and tol must be positive")
    if t_eval is None:
        t_eval = np.linspace(0.0, t_max, n_samples)
    t_eval = np.asarray(t_eval, dtype=float)
    sol = solve_ivp(_rhs(config), (0.0, t_max), [init.x0, init.z0], method="RK45",
                    rtol=TOL_SAFETY * tol, atol=TOL_SAFETY * tol, dense_output=True)
    if sol.status != 0:
        raise ToleranceNotMet(f"RK45 failed at tol={tol:g}: {sol.message}")
    x, z = sol.sol(t_eval)
    return Trajectory.from_path(t_eval, x, z, config, init)


@dataclass(frozen=True)
class EmpiricalClassification:
    drift_sign: int
    drift: float | None
    period: float | None
    loop_detected: bool
    monotone_x: bool
    z_bounded: bool
    reversals_per_period: float | None
    cls: TrajectoryClass


def _crossings(t, f, rising: bool):
    """Interpolated times where ``f`` changes sign (downward unless ``rising``)."""
    a, b = f[:-1], f[1:]
    idx = np.nonzero((a < 0) & (b >= 0) if rising else (a > 0) & (b <= 0))[0]
    w = a[idx] / (a[idx] - b[idx])
    return t[idx] + w * (t[idx + 1] - t[idx])


def _sign_changes(u) -> int:
    s = np.sign(u[np.abs(u) > X_DEAD_ZONE])
    return int(np.count_nonzero(s[1:] != s[:-1]))


def self_intersects(x, z, min_angle: float = MIN_CROSSING_ANGLE) -> bool:
    """True if the polyline crosses itself transversally.

    Segments sharing a vertex are skipped; crossings at an angle below
    ``min_angle`` are treated as tangencies.
    """
    p = np.column_stack([x, z])
    a, b = p[:-1], p[1:]
    d = b - a
    n = len(d)
    lo = np.minimum(a, b)
    hi = np.maximum(a, b)
    sin_min = math.sin(min_angle)
    for i in range(n - 2):
        j = np.arange(i + 2, n)
        box = ((lo[j, 0] <= hi[i, 0]) & (hi[j, 0] >= lo[i, 0])
               & (lo[j, 1] <= hi[i, 1]) & (hi[j, 1] >= lo[i, 1]))
        j = j[box]
        if j.size == 0:
            continue
        di, dj = d[i], d[j]
        cross = di[0] * dj[:, 1] - di[1] * dj[:, 0]
        r = a[j] - a[i]
        # a[i] + s di = a[j] + u dj
        with np.errstate(divide="ignore", invalid="ignore"):
            s = (r[:, 0] * dj[:, 1] - r[:, 1] * dj[:, 0]) / cross
            u = (r[:, 0] * di[1] - r[:, 1] * di[0]) / cross
        norm = np.hypot(*di) * np.hypot(dj[:, 0], dj[:, 1])
        ok = ((np.abs(cross) > sin_min * norm) & (s > 0) & (s < 1) & (u > 0) & (u < 1))
        if np.any(ok):
            return True
    return False


def classify_empirical(traj: Trajectory, samples_per_period: int = 200) -> EmpiricalClassification:
    """Classify a sampled path by what it does.

    Rules, in order: growth of ``z`` by more than ``1e3`` with monotone
    growth over the second half of the run means unbounded; no reversal of
    ``x`` is undulation; four or more reversals per period is the peculiar
    double pattern; two reversals with a transversal self-intersection is a
    loop.  Direction comes from the sign of the drift per period.
    """
    t, z = traj.t, traj.z
    z_growth = z[-1] / z[0]
    half = z[len(z) // 2:]
    z_bounded = not (z_growth > UNBOUNDED_GROWTH and np.all(np.diff(half) > 0))
    if not z_bounded:
        drift = float(traj.x[-1] - traj.x[0])
        cls = TrajectoryClass(Shape.NON_PHYSICAL_UNBOUNDED_Z)
        return EmpiricalClassification(int(np.sign(drift)), None, None, False,
                                       _sign_changes(traj.u) == 0, False, None, cls)

    tops = _crossings(t, traj.v, rising=False)
    if len(tops) < 2:
        raise PeriodNotFound("no repeated maxima of z within the sampled span")
    if len(tops) < 4:
        raise SpanTooShort(f"only {len(tops) - 1} periods sampled, need at least 3")
    n_per = len(tops) - 1
    T = float((tops[-1] - tops[0]) / n_per)
    drift = float((traj.x_at(tops[-1]) - traj.x_at(tops[0])) / n_per)

    window = (t >= tops[0]) & (t <= tops[-1])
    reversals = _sign_changes(traj.u[window]) / n_per
    monotone = reversals == 0

    ts = np.linspace(tops[0], tops[-1], n_per * samples_per_period + 1)
    loop = self_intersects(traj.x_at(ts), traj.z_at(ts))

    forward = drift > 0
    if monotone:
        shape = Shape.UNDULATING_RIGHT if forward else Shape.UNDULATING_LEFT
    elif round(reversals) >= 4:
        shape = Shape.PECULIAR
    elif loop:
        shape = Shape.LOOP_FORWARD_DRIFT if forward else Shape.LOOP_BACKWARD_DRIFT
    else:
        shape = Shape.PECULIAR
    return EmpiricalClassification(int(np.sign(drift)), drift, T, loop, monotone, True, reversals,
                                   TrajectoryClass(shape))


def _expected_period(config: FlowConfig, init: ParticleState) -> float | None:
    from .vorticity import first_integral, orbit_period

    if config.irrotational:
        c0 = config.c0
        return 1.0 / math.sqrt(c0 * (c0 - 2.0)) if c0 * (c0 - 2.0) > 0 else None
    fi = first_integral(config, init)
    return orbit_period(fi) if fi.condition_met else None


def empirical_class(config: FlowConfig, init: ParticleState, t_max: float | None = None,
                    tol: float = 1e-9, samples_per_period: int = 400,
                    max_extensions: int = 4) -> EmpiricalClassification:
    """Integrate with the oracle and classify the result.

    The horizon covers a little over four expected periods when a period is
    known, otherwise ``DEFAULT_HORIZON``; it is doubled while fewer than
    three full periods are seen.
    """
    T = _expected_period(config, init)
    if t_max is None:
        t_max = DEFAULT_HORIZON if T is None else 4.3 * T
    dt = (T / samples_per_period) if T is not None else 1.0 / samples_per_period
    for _ in range(max_extensions + 1):
        n = int(math.ceil(t_max / dt)) + 1
        traj = integrate_raw(config, init, t_max, tol=tol, t_eval=np.linspace(0.0, t_max, n))
        try:
            return classify_empirical(traj)
        except (SpanTooShort, PeriodNotFound):
            t_max *= 2.0
    return classify_empirical(traj)
