"""Particle paths beneath the wave in a constant-vorticity current.

In the frame moving with the wave, ``X = 2 pi (x - t)`` obeys the
autonomous pendulum-like equation

    X'' = 4 pi^2 sin(X) (1 - c0 - cos X),

and ``y = cot(X/2)`` has the first integral

    (y')^2 = C (y^2+1)^2 - 4 pi^2 c0 (y^2+1) + 4 pi^2.

Dividing by ``(y^2+1)^2`` gives the same relation in ``X``, which stays
finite where ``y`` has poles:

    X'^2 / 4 = C - 4 pi^2 c0 s + 4 pi^2 s^2,   s = sin^2(X/2).

Orbits are integrated in ``(X, X')`` with fixed-step RK4; ``z`` comes from
the moving-frame relation ``X' = 2 pi (cos X + shear Z + c0 - 1)`` or, for
weak shear, from integrating ``d ln Z / dt = 2 pi sin X``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .elliptic import legendre_reduce_general
from .errors import (ConditionViolated, DegeneratePhase, QuadratureFailure, SpanTooShort,
                     StepTooLarge)
from .model import FlowConfig, ParticleState, Trajectory

PI = math.pi
TWO_PI = 2.0 * PI
FOUR_PI2 = 4.0 * PI * PI

# below this |shear| the algebraic Z reconstruction amplifies integrator error
_ALGEBRAIC_SHEAR_MIN = 1e-2


@dataclass(frozen=True)
class MovingFrameState:
    X: float
    Z: float


@dataclass(frozen=True)
class ShearState:
    y: float
    y_prime: float


@dataclass(frozen=True)
class FirstIntegral:
    """Conserved constant of the reduced equation plus regime information.

    ``branch_sign`` is the sign of ``y'`` along the orbit; it is constant
    whenever ``condition_met``.  A zero ``y'(0)`` is resolved by the sign of
    ``y''(0)``; ``degenerate`` is set if that vanishes too.
    """

    C: float
    c0: float
    branch_sign: int
    condition_met: bool
    degenerate: bool = False

    @property
    def A_squared(self) -> float:
        return self.C

    @property
    def alternative(self) -> str:
        """Which ``x'(t)`` alternative applies: ``'+'`` for ``y' < 0``."""
        return "+" if self.branch_sign < 0 else "-"


def _check_phase(x0: float) -> None:
    if abs(math.sin(PI * x0)) < 1e-12:
        raise DegeneratePhase(f"x0 = {x0} is an integer; cot(pi*x0) is undefined, perturb x0")


def initial_shear_state(config: FlowConfig, init: ParticleState) -> ShearState:
    _check_phase(init.x0)
    y0 = math.cos(PI * init.x0) / math.sin(PI * init.x0)
    yp0 = PI * (2.0 - (config.shear * init.z0 + config.c0) * (y0 * y0 + 1.0))
    return ShearState(y0, yp0)


def moving_frame_rate(X: float, Z: float, config: FlowConfig) -> float:
    """``dX/dt`` in the moving frame."""
    return TWO_PI * (math.cos(X) + config.shear * Z + config.c0 - 1.0)


def phase_ode_rhs(X, c0: float):
    """``X''`` as a function of ``X`` alone."""
    return FOUR_PI2 * np.sin(X) * (1.0 - c0 - np.cos(X))


def constant_from_phase(X, P, c0: float):
    """First-integral constant computed from ``(X, X')``."""
    s = np.sin(0.5 * np.asarray(X)) ** 2
    return 0.25 * np.square(P) + FOUR_PI2 * c0 * s - FOUR_PI2 * s * s


def condition_holds(C: float, c0: float) -> bool:
    # relative margin keeps the irrotational identity C == pi^2 c0^2 on the "violated" side
    return C - PI**2 * c0**2 > 1e-9 * max(1.0, abs(C))


def first_integral(config: FlowConfig, init: ParticleState) -> FirstIntegral:
    _check_phase(init.x0)
    X0 = TWO_PI * init.x0
    P0 = moving_frame_rate(X0, init.z0, config)
    C = float(constant_from_phase(X0, P0, config.c0))
    # y' = -(y^2+1) X' / 2; values at rounding level of their terms count as zero
    scale = 1.0 + abs(config.c0) + abs(config.shear * init.z0)
    sign = -int(np.sign(P0)) if abs(P0) > 1e-12 * TWO_PI * scale else 0
    degenerate = False
    if sign == 0:
        # y'' = -(y^2+1) X'' / 2 when X' = 0
        Xpp = phase_ode_rhs(X0, config.c0)
        sign = -int(np.sign(Xpp)) if abs(Xpp) > 1e-12 * FOUR_PI2 * scale else 0
        degenerate = sign == 0
    return FirstIntegral(C=C, c0=config.c0, branch_sign=sign,
                         condition_met=condition_holds(C, config.c0), degenerate=degenerate)


def first_integral_residual(X, P, fi: FirstIntegral, normalized: bool = True):
    """Residual of the first-integral relation along ``(X, X')`` samples.

    The normalised residual is the relation divided by ``(y^2+1)^2``; the
    raw residual ``(y')^2 - C (y^2+1)^2 + 4 pi^2 c0 (y^2+1) - 4 pi^2`` is
    returned with ``normalized=False`` and is infinite at the poles of ``y``.
    """
    r = constant_from_phase(X, P, fi.c0) - fi.C
    if normalized:
        return r
    s = np.sin(0.5 * np.asarray(X)) ** 2
    with np.errstate(divide="ignore", invalid="ignore"):
        return r / (s * s)


def shear_coordinates(X, P):
    """``(y, y')`` from ``(X, X')``."""
    X = np.asarray(X)
    y = np.cos(0.5 * X) / np.sin(0.5 * X)
    return y, -0.5 * (y * y + 1.0) * np.asarray(P)


def _rk4(X, P, L, c0, h, n):
    """Fixed-step RK4 on ``X' = P, P' = X''(X), (ln Z)' = 2 pi sin X``."""
    sin, cos = math.sin, math.cos
    k = FOUR_PI2
    a = 1.0 - c0
    out = np.empty((n + 1, 3))
    out[0] = X, P, L
    h2, h6 = 0.5 * h, h / 6.0
    for i in range(1, n + 1):
        s1 = sin(X)
        p1, q1, l1 = P, k * s1 * (a - cos(X)), s1
        Xb = X + h2 * p1
        s2 = sin(Xb)
        p2, q2, l2 = P + h2 * q1, k * s2 * (a - cos(Xb)), s2
        Xc = X + h2 * p2
        s3 = sin(Xc)
        p3, q3, l3 = P + h2 * q2, k * s3 * (a - cos(Xc)), s3
        Xd = X + h * p3
        s4 = sin(Xd)
        p4, q4, l4 = P + h * q3, k * s4 * (a - cos(Xd)), s4
        X += h6 * (p1 + 2.0 * (p2 + p3) + p4)
        P += h6 * (q1 + 2.0 * (q2 + q3) + q4)
        L += TWO_PI * h6 * (l1 + 2.0 * (l2 + l3) + l4)
        out[i] = X, P, L
    return out


def integrate_orbit(config: FlowConfig, init: ParticleState, t_max: float, dt: float = 1e-4,
                    residual_tol: float = 1e-6, max_refinements: int = 3) -> Trajectory:
    """Integrate one particle path in the moving frame.

    Samples are returned every ``dt``.  If the first-integral residual
    exceeds ``residual_tol`` the internal step is halved, at most
    ``max_refinements`` times, before :class:`StepTooLarge` is raised.
    """
    if not dt > 0 or not t_max > 0:
        raise ValueError("dt and t_max must be positive")
    fi = first_integral(config, init)
    n = int(math.ceil(t_max / dt - 1e-9))
    t = np.arange(n + 1) * dt
    X0 = TWO_PI * init.x0
    P0 = moving_frame_rate(X0, init.z0, config)
    use_algebraic = abs(config.shear) >= _ALGEBRAIC_SHEAR_MIN

    worst = math.inf
    for level in range(max_refinements + 1):
        sub = 2**level
        sol = _rk4(X0, P0, math.log(init.z0), config.c0, dt / sub, n * sub)[::sub]
        X, P, L = sol[:, 0], sol[:, 1], sol[:, 2]
        worst = float(np.max(np.abs(first_integral_residual(X, P, fi))))
        Z_quad = np.exp(L)
        if use_algebraic:
            Z = (P / TWO_PI - np.cos(X) - config.c0 + 1.0) / config.shear
            gap = float(np.max(np.abs(Z - Z_quad) / np.maximum(1.0, np.abs(Z))))
        else:
            Z, gap = Z_quad, 0.0
        if worst <= residual_tol and gap <= residual_tol:
            break
    else:
        raise StepTooLarge(f"first-integral residual {worst:.3g} (or Z mismatch) above "
                           f"{residual_tol:g} after {max_refinements} refinements of dt={dt:g}")

    x = t + X / TWO_PI
    traj = Trajectory.from_path(t, x, Z, config, init)
    if fi.condition_met and not config.irrotational:
        T = orbit_period(fi)
        drift = drift_per_period(traj, T) if t[-1] >= T else None
        traj = traj.replace(period=T, drift=drift)
    return traj


def phase_samples(traj: Trajectory):
    """Recover ``(X, X')`` from a trajectory's samples."""
    X = TWO_PI * (traj.x - traj.t)
    P = TWO_PI * (traj.u - 1.0)
    return X, P


def period_quadrature(C: float, c0: float) -> float:
    """Traversal time of ``y`` over the real line, by adaptive quadrature.

    Uses ``y = tan(theta)``, which maps the line onto ``(-pi/2, pi/2)`` and
    leaves a smooth, bounded integrand.
    """
    if not condition_holds(C, c0):
        raise ConditionViolated(f"C = {C} <= pi^2 c0^2: y has turning points, no traversal period")

    def f(th):
        c2 = math.cos(th) ** 2
        return 1.0 / math.sqrt(C - FOUR_PI2 * c0 * c2 + FOUR_PI2 * c2 * c2)

    val, err = integrate.quad(f, 0.0, 0.5 * PI, epsabs=0.0, epsrel=1e-13, limit=500)
    if not err <= 1e-11 * abs(val):
        raise QuadratureFailure(f"period quadrature error estimate {err:g} too large")
    return 2.0 * val


def period_legendre(C: float, c0: float) -> float:
    """Traversal time from the Legendre normal form, ``2 K(k) / sqrt(C S)``."""
    return 2.0 * legendre_reduce_general(C, c0).half_traversal()


def orbit_period(fi: FirstIntegral, config: FlowConfig | None = None, rtol: float = 1e-8) -> float:
    """Time for ``X`` to change by ``2 pi``; both routes must agree to ``rtol``."""
    if not fi.condition_met:
        raise ConditionViolated("condition C > pi^2 c0^2 not met; period undefined")
    c0 = fi.c0 if config is None else config.c0
    Tq = period_quadrature(fi.C, c0)
    Tl = period_legendre(fi.C, c0)
    if abs(Tq - Tl) > rtol * Tl:
        raise QuadratureFailure(f"period routes disagree: quadrature {Tq!r}, Legendre {Tl!r}")
    return Tl


def drift_per_period(traj: Trajectory, T: float, t0: float = 0.0) -> float:
    """``x(t0 + T) - x(t0)``; equals ``T - branch_sign`` on exact orbits."""
    if t0 < traj.t[0] or t0 + T > traj.t[-1]:
        raise SpanTooShort(f"trajectory covers [{traj.t[0]}, {traj.t[-1]}], need [{t0}, {t0 + T}]")
    return float(traj.x_at(t0 + T) - traj.x_at(t0))
