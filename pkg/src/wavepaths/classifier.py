"""Analytic shape prediction for constant-vorticity flows.

Along an orbit with ``C > pi^2 c0^2`` the sign of ``y'`` never changes and

    x' = 1 - y' / (pi (y^2 + 1)).

For ``y' < 0`` (the ``+`` alternative) ``x' > 0`` everywhere.  For
``y' > 0`` (the ``-`` alternative) the sign of ``x'`` is the sign of

    P(W) = (pi^2 - C) W^2 + 4 pi^2 c0 W - 4 pi^2,   W = y^2 + 1 >= 1,

so the roots of ``P`` above ``W = 1`` fix how often ``x`` reverses per
period.  The case tree below (I, II a, II b) sorts parameters by those
roots.  Where ``x`` reverses twice per period the path loops, and whether
the loops drift forward or backward is the sign of the drift per period
``T - sign(y')``, with ``T`` taken from the elliptic period.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateBranch
from .irrotational import classify_irrotational
from .model import (BOUNDARY_CASE, CLOSED_ORBIT_CANDIDATE, FlowConfig, ParticleState, Shape,
                    TrajectoryClass)
from .vorticity import first_integral, orbit_period

PI = math.pi
PI2 = PI * PI

_EQ_RTOL = 1e-9


def _near(a: float, b: float) -> bool:
    return abs(a - b) <= _EQ_RTOL * max(1.0, abs(a), abs(b))


@dataclass(frozen=True)
class ClassifierAnalysis:
    C: float
    c0: float
    branch_sign: int
    condition_met: bool
    delta: float
    w1: float | None
    w2: float | None
    sub_case: str
    intervals_visited: bool
    period: float | None
    drift: float | None

    def x_rate_polynomial(self, W):
        """``P(W)``; ``x'`` has its sign on the ``-`` alternative."""
        return (PI2 - self.C) * np.square(W) + 4.0 * PI2 * self.c0 * np.asarray(W) - 4.0 * PI2


def w_roots(C: float, c0: float):
    """Real roots ``(W1, W2)`` of ``P``, named as in the case analysis.

    ``W1`` carries ``+sqrt`` in the quadratic formula, so ``W1 < W2`` when
    ``pi^2 - C < 0``.  Roots are computed without cancellation.  Returns
    ``(None, None)`` for complex roots; with ``pi^2 = C`` the single root of
    the linear equation is returned as ``W1``.
    """
    a = PI2 - C
    disc = PI2 * c0 * c0 + PI2 - C  # delta / (16 pi^2)
    if disc < 0:
        return None, None
    D = 2.0 * PI * math.sqrt(disc)
    if a == 0.0:
        return (1.0 / c0 if c0 != 0 else None), None
    if c0 >= 0:
        n2 = -2.0 * PI2 * c0 - D
        return -4.0 * PI2 / n2, n2 / a
    n1 = -2.0 * PI2 * c0 + D
    return n1 / a, -4.0 * PI2 / n1


def _loop_shape(drift: float, flags: set) -> Shape:
    if abs(drift) < 1e-9:
        flags |= {BOUNDARY_CASE, CLOSED_ORBIT_CANDIDATE}
    return Shape.LOOP_FORWARD_DRIFT if drift > 0 else Shape.LOOP_BACKWARD_DRIFT


def analyze(config: FlowConfig, init: ParticleState):
    """Run the case tree; returns ``(analysis, nominal shape, flags)``."""
    if config.irrotational:
        raise ValueError("zero shear: use classify_irrotational")
    fi = first_integral(config, init)
    if fi.degenerate:
        raise DegenerateBranch("y'(0) = y''(0) = 0: the particle sits at a fixed point of the moving frame")
    C, c0, s = fi.C, config.c0, fi.branch_sign
    delta = 16.0 * PI2 * (PI2 * c0 * c0 + PI2 - C)
    w1, w2 = w_roots(C, c0)
    flags: set = set()

    T = drift = None
    if not fi.condition_met:
        sub, shape = "condition violated", Shape.NUMERICAL_FALLBACK
    else:
        T = orbit_period(fi)
        drift = T - s
        if s < 0:
            sub, shape = "+ alternative", Shape.UNDULATING_RIGHT
        elif c0 == 0.0:
            if _near(C, PI2):
                flags.add(BOUNDARY_CASE)
            if C > PI2:
                sub, shape = "c0=0, |A|>pi", Shape.UNDULATING_LEFT
            else:
                sub, shape = "c0=0, |A|<pi", _loop_shape(drift, flags)
        elif C > PI2 * c0 * c0 + PI2 and not _near(C, PI2 * c0 * c0 + PI2):
            sub, shape = "I", Shape.UNDULATING_LEFT
        else:
            if _near(C, PI2 * c0 * c0 + PI2):
                flags.add(BOUNDARY_CASE)
                if w1 is None:  # rounding put the double root just off the real axis
                    w1 = w2 = -2.0 * PI2 * c0 / (PI2 - C)
            a = PI2 - C
            if _near(C, PI2) or a == 0.0:
                flags.add(BOUNDARY_CASE)
                if c0 < 0:
                    sub, shape = "II, pi^2=C, c0<0", Shape.UNDULATING_LEFT
                elif 1.0 / c0 < 1.0:
                    sub, shape = "II, pi^2=C, W-1<0", Shape.UNDULATING_RIGHT
                else:
                    sub, shape = "II, pi^2=C, W-1>0", _loop_shape(drift, flags)
            elif a > 0:
                if _near(w1, 1.0):
                    flags.add(BOUNDARY_CASE)
                if w1 < 1.0:
                    sub, shape = "II a, W1-1<0", Shape.UNDULATING_RIGHT
                else:
                    sub, shape = "II a, W1-1>0", _loop_shape(drift, flags)
            elif c0 < 0:
                sub, shape = "II b, c0<0", Shape.UNDULATING_LEFT
            else:
                if _near(w1, 1.0) or _near(w2, 1.0):
                    flags.add(BOUNDARY_CASE)
                if w2 < 1.0:
                    sub, shape = "II b, W1-1<0, W2-1<0", Shape.UNDULATING_LEFT
                elif w1 < 1.0:
                    sub, shape = "II b, W1-1<0<W2-1", _loop_shape(drift, flags)
                else:
                    sub, shape = "II b, W1-1>0, W2-1>0", Shape.PECULIAR

    analysis = ClassifierAnalysis(C=C, c0=c0, branch_sign=s, condition_met=fi.condition_met,
                                  delta=delta, w1=w1, w2=w2, sub_case=sub,
                                  intervals_visited=fi.condition_met, period=T, drift=drift)
    return analysis, shape, flags


def classify(config: FlowConfig, init: ParticleState, resolve: bool = True) -> TrajectoryClass:
    """Predict the trajectory shape for a sheared flow.

    Boundary parameters and orbits violating ``C > pi^2 c0^2`` are passed to
    the numerical oracle when ``resolve`` is set; its verdict is stored in
    ``resolved``.
    """
    analysis, shape, flags = analyze(config, init)
    resolved = None
    if resolve and (BOUNDARY_CASE in flags or shape is Shape.NUMERICAL_FALLBACK):
        from .oracle import empirical_class

        resolved = empirical_class(config, init).cls.shape
    branch = "+" if analysis.branch_sign < 0 else "-"
    return TrajectoryClass(shape, analysis.sub_case, branch, frozenset(flags), resolved, analysis)


def classify_flow(config: FlowConfig, init: ParticleState, resolve: bool = True) -> TrajectoryClass:
    """Dispatch to the irrotational or the sheared classifier."""
    if config.irrotational:
        return classify_irrotational(config.c0, init, resolve=resolve)
    return classify(config, init, resolve=resolve)


@dataclass(frozen=True)
class SignInterval:
    lo: float
    hi: float
    x_sign: int
    z_sign: int


def sign_table(analysis: ClassifierAnalysis) -> list[SignInterval]:
    """Signs of ``x'`` and ``z'`` on the intervals of ``y`` cut by the zeros of ``x'``."""
    if not analysis.condition_met:
        raise ValueError("sign table needs C > pi^2 c0^2")
    cuts = [0.0]
    if analysis.branch_sign > 0:
        for w in (analysis.w1, analysis.w2):
            if w is not None and w > 1.0:
                r = math.sqrt(w - 1.0)
                cuts += [-r, r]
    cuts = sorted(set(cuts))
    edges = [-math.inf] + cuts + [math.inf]
    out = []
    for lo, hi in zip(edges[:-1], edges[1:]):
        if math.isinf(lo):
            y = 2.0 * hi - 1.0 if hi <= 0 else -1.0
            y = min(y, 2.0 * hi - 1.0)
        elif math.isinf(hi):
            y = 2.0 * lo + 1.0
        else:
            y = 0.5 * (lo + hi)
        if analysis.branch_sign < 0:
            xs = 1
        else:
            xs = int(np.sign(analysis.x_rate_polynomial(y * y + 1.0)))
        zs = 1 if y > 0 else -1
        out.append(SignInterval(lo, hi, xs, zs))
    return out
