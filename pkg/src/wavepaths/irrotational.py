"""Exact particle paths for the irrotational flow (zero shear).

With ``y = cot(X/2)``, ``X = 2 pi (x - t)``, the moving-frame system
reduces to the Riccati equation ``y' = -pi (c0 y^2 + c0 - 2)``, solved by

* ``c0 = 0``:            ``y = 2 pi t + a``
* ``c0 (c0 - 2) > 0``:   ``y = C0 tan(alpha(t))``,  ``C0 = sqrt((c0-2)/c0)``
* ``0 < c0 < 2``:        ``y = K0 tanh(beta(t))`` or ``K0 coth(beta(t))``,
  ``K0 = sqrt((2-c0)/c0)``, depending on ``|y(0)|`` versus ``K0``

and then ``x = t + arccot(y)/pi``, ``z = z0 exp(int_0^t 4 pi y/(1+y^2) ds)``.

``arccot`` takes values in ``(0, pi)``.  Paths are kept continuous across
the poles of ``tan``/``coth`` by tracking the half-phase ``theta = X/2``
through them instead of re-evaluating ``arccot`` on each branch.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import BranchBoundary, DegeneratePhase, QuadratureFailure
from .model import (BOUNDARY_CASE, CLOSED_ORBIT_CANDIDATE, DEGENERATE_CASE, FlowConfig,
                    ParticleState, Shape, Trajectory, TrajectoryClass)

PI = math.pi
TWO_PI = 2.0 * PI

_SEPARATRIX_TOL = 1e-12


class IrrotationalCase(enum.Enum):
    ZERO_CURRENT = "ZeroCurrent"
    OUTSIDE_BAND = "OutsideBand"
    INSIDE_BAND = "InsideBand"


def case_of(c0: float) -> IrrotationalCase:
    if c0 == 0.0:
        return IrrotationalCase.ZERO_CURRENT
    if c0 * (c0 - 2.0) > 0.0:
        return IrrotationalCase.OUTSIDE_BAND
    return IrrotationalCase.INSIDE_BAND


@dataclass(frozen=True)
class IrrotationalCaseParams:
    """Constants of the exact solution.

    ``a`` is ``cot(pi x0)``.  ``phase0`` is ``alpha(0)`` (outside band) or
    ``beta(0)`` (inside band), fixed so that ``y(0) = a``; ``a_eff`` is the
    constant that puts ``alpha``/``beta`` in the form ``+-(c0 K/2)(2 pi t + a_eff)``.
    """

    c0: float
    a: float
    case: IrrotationalCase
    C0frak: float | None = None
    K0frak: float | None = None
    phase0: float = 0.0
    hyperbolic: str | None = None  # "tanh" or "coth" inside the band

    @property
    def rate(self) -> float:
        """``d alpha/dt`` or ``d beta/dt``."""
        if self.case is IrrotationalCase.OUTSIDE_BAND:
            return -PI * self.c0 * self.C0frak
        if self.case is IrrotationalCase.INSIDE_BAND:
            return PI * self.c0 * self.K0frak
        return TWO_PI

    @property
    def a_eff(self) -> float:
        if self.case is IrrotationalCase.ZERO_CURRENT:
            return self.a
        return TWO_PI * self.phase0 / self.rate

    def alpha(self, t):
        return self.phase0 + self.rate * np.asarray(t, dtype=float)

    beta = alpha


def case_params(c0: float, init: ParticleState) -> IrrotationalCaseParams:
    if abs(math.sin(PI * init.x0)) < 1e-12:
        raise DegeneratePhase(f"x0 = {init.x0} is an integer; cot(pi*x0) is undefined, perturb x0")
    a = math.cos(PI * init.x0) / math.sin(PI * init.x0)
    case = case_of(c0)
    if case is IrrotationalCase.ZERO_CURRENT:
        return IrrotationalCaseParams(c0, a, case)
    if case is IrrotationalCase.OUTSIDE_BAND:
        C0 = math.sqrt((c0 - 2.0) / c0)
        return IrrotationalCaseParams(c0, a, case, C0frak=C0, phase0=math.atan(a / C0))
    K0 = math.sqrt((2.0 - c0) / c0)
    if abs(abs(a) - K0) < _SEPARATRIX_TOL:
        raise BranchBoundary(f"|cot(pi x0)| = {abs(a)} equals K0 = {K0}; perturb x0")
    if abs(a) < K0:
        return IrrotationalCaseParams(c0, a, case, K0frak=K0, phase0=math.atanh(a / K0),
                                      hyperbolic="tanh")
    return IrrotationalCaseParams(c0, a, case, K0frak=K0, phase0=math.atanh(K0 / a),
                                  hyperbolic="coth")


class IrrotationalSolution:
    """Closed-form path ``(x(t), z(t))`` for one particle."""

    def __init__(self, c0: float, init: ParticleState):
        self.params = case_params(c0, init)
        self.init = init
        self.config = FlowConfig(c0=c0)
        self._x_shift = round(init.x0 - float(self.theta(0.0)) / PI)

    def theta(self, t):
        """Continuous half-phase ``X/2 = pi (x - t)`` up to a constant multiple of ``pi``."""
        p = self.params
        s = p.alpha(t)
        if p.case is IrrotationalCase.ZERO_CURRENT:
            return 0.5 * PI - np.arctan(s + p.a)
        if p.case is IrrotationalCase.OUTSIDE_BAND:
            # cot(theta) = C0 tan(alpha) = C0 cot(psi), psi = pi/2 - alpha
            psi = 0.5 * PI - s
            k = np.floor(psi / PI)
            r = psi - k * PI
            return np.arctan2(np.sin(r), p.C0frak * np.cos(r)) + k * PI
        if p.hyperbolic == "tanh":
            return np.arctan2(1.0, p.K0frak * np.tanh(s))
        return np.arctan2(np.tanh(s), p.K0frak)

    def y(self, t):
        """``cot(X/2)`` from the per-branch closed form (infinite at poles)."""
        p = self.params
        s = p.alpha(t)
        with np.errstate(divide="ignore"):
            if p.case is IrrotationalCase.ZERO_CURRENT:
                return TWO_PI * np.asarray(t, dtype=float) + p.a
            if p.case is IrrotationalCase.OUTSIDE_BAND:
                return p.C0frak * np.tan(s)
            if p.hyperbolic == "tanh":
                return p.K0frak * np.tanh(s)
            return p.K0frak / np.tanh(s)

    def integrand(self, t):
        """``d ln z / dt = 4 pi y / (1 + y^2) = 2 pi sin(2 theta)``."""
        return TWO_PI * np.sin(2.0 * self.theta(t))

    def x(self, t):
        return np.asarray(t, dtype=float) + self.theta(t) / PI + self._x_shift

    def log_growth(self, t):
        """``ln(z(t)/z0)`` by composite Gauss-Legendre quadrature.

        With ``y = cot(theta)`` the integrand is ``2 pi sin(2 theta)``,
        smooth in ``t`` through the poles of ``y``.  Sub-intervals are short
        enough for ``theta`` to move by at most about ``0.05 pi``; a 10-point
        and a 20-point rule must agree or :class:`QuadratureFailure` is raised.
        """
        shape = np.shape(t)
        t = np.atleast_1d(np.asarray(t, dtype=float))
        p = self.params
        if p.case is IrrotationalCase.ZERO_CURRENT:
            return (np.log1p(np.square(TWO_PI * t + p.a)) - math.log1p(p.a * p.a)).reshape(shape)
        knots, inverse = np.unique(np.append(t, 0.0), return_inverse=True)
        # |d theta/dt| = pi |u - 1| <= pi (2 + |c0|)
        h = 0.05 / (2.0 + abs(p.c0))
        m = np.maximum(1, np.ceil(np.diff(knots) / h).astype(int))
        edges = np.concatenate([np.linspace(a, b, k + 1)[:-1] for a, b, k in
                                zip(knots[:-1], knots[1:], m)] + [knots[-1:]])
        a, b = edges[:-1], edges[1:]
        mid, half = 0.5 * (a + b), 0.5 * (b - a)

        def rule(n):
            nodes, weights = np.polynomial.legendre.leggauss(n)
            th = self.theta(mid[:, None] + half[:, None] * nodes)
            return half * (np.sin(2.0 * th) @ weights) * TWO_PI

        lo, hi = rule(10), rule(20)
        err = float(np.max(np.abs(hi - lo), initial=0.0))
        if err > 1e-12 * max(1.0, float(np.max(np.abs(hi), initial=0.0))):
            raise QuadratureFailure(f"Gauss-Legendre rules disagree by {err:g}")
        cum = np.concatenate([[0.0], np.cumsum(hi)])
        at_knots = cum[np.concatenate([[0], np.cumsum(m)])]
        at_knots = at_knots - at_knots[np.searchsorted(knots, 0.0)]
        return at_knots[inverse[:-1]].reshape(shape)

    def z(self, t):
        return self.init.z0 * np.exp(self.log_growth(t))

    def rates(self, t):
        """Time derivatives of the closed-form ``(x, z)``, differentiated analytically."""
        p = self.params
        s = p.alpha(t)
        if p.case is IrrotationalCase.ZERO_CURRENT:
            dtheta = -TWO_PI * np.sin(self.theta(t)) ** 2
        elif p.case is IrrotationalCase.OUTSIDE_BAND:
            dtheta = -p.C0frak * p.rate / (np.cos(s) ** 2 + p.C0frak**2 * np.sin(s) ** 2)
        elif p.hyperbolic == "tanh":
            K2 = p.K0frak**2
            dtheta = -p.K0frak * p.rate / (np.cosh(s) ** 2 + K2 * np.sinh(s) ** 2)
        else:
            K2 = p.K0frak**2
            dtheta = p.K0frak * p.rate / (np.sinh(s) ** 2 + K2 * np.cosh(s) ** 2)
        return 1.0 + dtheta / PI, self.z(t) * self.integrand(t)

    def period(self) -> float | None:
        """Time for ``y`` to traverse the real line (outside band only)."""
        p = self.params
        if p.case is IrrotationalCase.OUTSIDE_BAND:
            return PI / abs(p.rate)
        return None

    def trajectory(self, t_range=(0.0, 1.0), n_samples: int = 1001, cls=None) -> Trajectory:
        if n_samples < 2:
            raise ValueError("need at least two samples")
        t = np.linspace(t_range[0], t_range[1], n_samples)
        T = self.period()
        drift = None
        if T is not None:
            # X advances by -2 pi sign(y') per traversal
            drift = T + (1.0 if self.params.c0 > 2.0 else -1.0)
        return Trajectory.from_path(t, self.x(t), self.z(t), self.config, self.init,
                                    cls=cls, period=T, drift=drift)


def classify_irrotational(c0: float, init: ParticleState | None = None,
                          resolve: bool = False) -> TrajectoryClass:
    """Trajectory shape for the irrotational flow with current ``c0``.

    Loops occur for ``-1 < c0 < 0``; their drift per period is
    ``1/sqrt(c0 (c0-2)) - 1``, forward only for ``c0 > 1 - sqrt(2)``.
    Threshold values are flagged and, with ``resolve=True`` and an initial
    state, classified empirically.
    """
    flags = set()
    if c0 > 2.0:
        cls = TrajectoryClass(Shape.UNDULATING_RIGHT, "c0>2", "+")
    elif c0 < -1.0:
        cls = TrajectoryClass(Shape.UNDULATING_LEFT, "c0<-1", "-")
    elif c0 < 0.0:
        drift = 1.0 / math.sqrt(c0 * (c0 - 2.0)) - 1.0
        if c0 == -1.0:
            flags.add(BOUNDARY_CASE)
        if abs(drift) < 1e-9:
            flags |= {BOUNDARY_CASE, CLOSED_ORBIT_CANDIDATE}
        shape = Shape.LOOP_FORWARD_DRIFT if drift > 0 else Shape.LOOP_BACKWARD_DRIFT
        cls = TrajectoryClass(shape, "-1<c0<0", "-", frozenset(flags))
    elif c0 == 0.0:
        cls = TrajectoryClass(Shape.NON_PHYSICAL_UNBOUNDED_Z, "c0=0", "-", frozenset({BOUNDARY_CASE}))
    else:
        if c0 == 2.0:
            flags |= {BOUNDARY_CASE, DEGENERATE_CASE}
        cls = TrajectoryClass(Shape.NON_PHYSICAL_UNBOUNDED_Z, "0<c0<=2", None, frozenset(flags))

    if resolve and BOUNDARY_CASE in cls.flags and init is not None:
        from .oracle import empirical_class

        emp = empirical_class(FlowConfig(c0=c0), init)
        cls = TrajectoryClass(cls.shape, cls.sub_case, cls.branch, cls.flags, emp.cls.shape)
    return cls


def _require(cond: bool, msg: str):
    if not cond:
        raise ValueError(msg)


def trajectory_zero_current(init: ParticleState, t_range=(0.0, 1.0), n_samples: int = 1001) -> Trajectory:
    sol = IrrotationalSolution(0.0, init)
    return sol.trajectory(t_range, n_samples, classify_irrotational(0.0))


def trajectory_outside_band(config: FlowConfig, init: ParticleState, t_range=(0.0, 1.0),
                            n_samples: int = 1001) -> Trajectory:
    c0 = config.c0
    _require(c0 * (c0 - 2.0) > 0.0, f"c0 = {c0} does not satisfy c0 (c0 - 2) > 0")
    sol = IrrotationalSolution(c0, init)
    return sol.trajectory(t_range, n_samples, classify_irrotational(c0))


def trajectory_inside_band(config: FlowConfig, init: ParticleState, t_range=(0.0, 1.0),
                           n_samples: int = 1001) -> Trajectory:
    """Exact path for ``0 < c0 <= 2``.

    At ``c0 = 2`` the band collapses (``K0 = 0``); the path is then taken
    from the numerical oracle and flagged ``DegenerateCase``.
    """
    c0 = config.c0
    _require(0.0 < c0 <= 2.0, f"c0 = {c0} outside (0, 2]")
    cls = classify_irrotational(c0)
    if c0 == 2.0:
        from .oracle import integrate_raw

        t = np.linspace(t_range[0], t_range[1], n_samples)
        traj = integrate_raw(FlowConfig(c0=c0), init, t_range[1], tol=1e-10, t_eval=t)
        return traj.replace(cls=cls)
    sol = IrrotationalSolution(c0, init)
    return sol.trajectory(t_range, n_samples, cls)


def trajectory_irrotational(c0: float, init: ParticleState, t_range=(0.0, 1.0),
                            n_samples: int = 1001) -> Trajectory:
    case = case_of(c0)
    if case is IrrotationalCase.ZERO_CURRENT:
        return trajectory_zero_current(init, t_range, n_samples)
    if case is IrrotationalCase.OUTSIDE_BAND:
        return trajectory_outside_band(FlowConfig(c0=c0), init, t_range, n_samples)
    return trajectory_inside_band(FlowConfig(c0=c0), init, t_range, n_samples)
