"""Shared domain types and the linear field solution.

All quantities are dimensionless except the physical inputs accepted by
:class:`FlowConfig` (``omega0`` in 1/s, ``g`` in m/s^2, ``h0`` in m), which
are folded into the shear coefficient once on construction.

The travelling wave is fixed to ``f(s) = cos(2*pi*s)``; :func:`wave` and
:func:`wave_slope` are the only places that know this.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

TWO_PI = 2.0 * math.pi


def wave(s):
    """Wave profile ``f(s)``."""
    return np.cos(TWO_PI * s)


def wave_slope(s):
    """Derivative ``f'(s)``."""
    return -TWO_PI * np.sin(TWO_PI * s)


@dataclass(frozen=True)
class FlowConfig:
    """Flow parameters.

    ``shear`` is computed from ``(omega0, g, h0)``.  Use
    :meth:`from_shear` when the dimensionless shear is known directly.
    """

    c0: float = 0.0
    omega0: float = 0.0
    g: float = 9.81
    h0: float = 1.0
    shear: float = field(init=False)

    def __post_init__(self):
        if not self.g > 0 or not self.h0 > 0:
            raise ValueError(f"g and h0 must be positive, got g={self.g}, h0={self.h0}")
        object.__setattr__(self, "shear", self.omega0 * math.sqrt(self.g * self.h0) / self.g)

    @classmethod
    def from_shear(cls, shear: float, c0: float = 0.0, g: float = 9.81, h0: float = 1.0) -> FlowConfig:
        omega0 = shear * g / math.sqrt(g * h0)
        cfg = cls(c0=c0, omega0=omega0, g=g, h0=h0)
        # the round trip through omega0 may lose an ulp; keep the requested value
        object.__setattr__(cfg, "shear", float(shear))
        return cfg

    @property
    def irrotational(self) -> bool:
        return self.shear == 0.0

    def as_dict(self) -> dict:
        return {"c0": self.c0, "omega0": self.omega0, "g": self.g, "h0": self.h0, "shear": self.shear}


@dataclass(frozen=True)
class ParticleState:
    x0: float = 0.5
    z0: float = 0.5

    def __post_init__(self):
        if not 0 < self.z0 <= 1:
            raise ValueError(f"z0 must lie in (0, 1], got {self.z0}")

    def as_dict(self) -> dict:
        return {"x0": self.x0, "z0": self.z0}


@dataclass(frozen=True)
class FieldSample:
    eta: float
    p: float
    u: float
    v: float


def surface_profile(x, t):
    """Free-surface elevation ``eta(x, t)``."""
    return wave(np.subtract(x, t))


def velocity_field(x, z, t, config: FlowConfig) -> FieldSample:
    """Linear solution ``(eta, p, u, v)`` at ``(x, z, t)``.

    Pressure equals the surface elevation at every depth; ``v = -z u_x``.
    Accepts array arguments (broadcast) as well as scalars.
    """
    if np.any(np.less(z, 0.0)) or np.any(np.greater(z, 2.0)):
        warnings.warn("z outside [0, 2]: far from the linearised fluid domain", stacklevel=2)
    return _field(x, z, t, config)


def _field(x, z, t, config):
    phase = np.subtract(x, t)
    eta = wave(phase)
    u = eta + config.shear * np.asarray(z) + config.c0
    v = -np.asarray(z) * wave_slope(phase)
    if np.ndim(u) == 0:
        return FieldSample(float(eta), float(eta), float(u), float(v))
    return FieldSample(eta, eta, u, v)


class Shape(enum.Enum):
    UNDULATING_RIGHT = "UndulatingRight"
    UNDULATING_LEFT = "UndulatingLeft"
    LOOP_FORWARD_DRIFT = "LoopForwardDrift"
    LOOP_BACKWARD_DRIFT = "LoopBackwardDrift"
    PECULIAR = "Peculiar"
    NON_PHYSICAL_UNBOUNDED_Z = "NonPhysicalUnboundedZ"
    NUMERICAL_FALLBACK = "NumericalFallback"

    def __str__(self):
        return self.value


# Flags attached to a TrajectoryClass.
BOUNDARY_CASE = "BoundaryCase"
DEGENERATE_CASE = "DegenerateCase"
CLOSED_ORBIT_CANDIDATE = "ClosedOrbitCandidate"

_LOOPS = frozenset({Shape.LOOP_FORWARD_DRIFT, Shape.LOOP_BACKWARD_DRIFT})
_ANY = frozenset(Shape)

# Sub-case label -> shapes the label admits.  Loop direction is set by the
# sign of the drift per period, which the sign pattern alone does not fix.
CASE_TABLE: dict[str, frozenset[Shape]] = {
    # irrotational
    "c0=0": frozenset({Shape.NON_PHYSICAL_UNBOUNDED_Z}),
    "c0>2": frozenset({Shape.UNDULATING_RIGHT}),
    "c0<-1": frozenset({Shape.UNDULATING_LEFT}),
    "-1<c0<0": _LOOPS,
    "0<c0<=2": frozenset({Shape.NON_PHYSICAL_UNBOUNDED_Z}),
    # constant vorticity
    "+ alternative": frozenset({Shape.UNDULATING_RIGHT}),
    "c0=0, |A|>pi": frozenset({Shape.UNDULATING_LEFT}),
    "c0=0, |A|<pi": _LOOPS,
    "I": frozenset({Shape.UNDULATING_LEFT}),
    "II a, W1-1<0": frozenset({Shape.UNDULATING_RIGHT}),
    "II a, W1-1>0": _LOOPS,
    "II, pi^2=C, W-1<0": frozenset({Shape.UNDULATING_RIGHT}),
    "II, pi^2=C, W-1>0": _LOOPS,
    "II, pi^2=C, c0<0": frozenset({Shape.UNDULATING_LEFT}),
    "II b, c0<0": frozenset({Shape.UNDULATING_LEFT}),
    "II b, W1-1<0, W2-1<0": frozenset({Shape.UNDULATING_LEFT}),
    "II b, W1-1<0<W2-1": _LOOPS,
    "II b, W1-1>0, W2-1>0": frozenset({Shape.PECULIAR}),
    "condition violated": frozenset({Shape.NUMERICAL_FALLBACK}),
    "empirical": _ANY,
}


@dataclass(frozen=True)
class TrajectoryClass:
    """Predicted or observed trajectory shape.

    ``branch`` is ``"+"`` or ``"-"`` (which of the two ``x'(t)``
    alternatives applies), ``None`` where it does not apply.  ``resolved``
    carries the empirical verdict when the analytic tree could not decide
    (boundary values, violated condition).
    """

    shape: Shape
    sub_case: str = "empirical"
    branch: str | None = None
    flags: frozenset = frozenset()
    resolved: Shape | None = None
    analysis: object = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        allowed = CASE_TABLE.get(self.sub_case)
        if allowed is None:
            raise ValueError(f"unknown sub-case label {self.sub_case!r}")
        if self.shape not in allowed and BOUNDARY_CASE not in self.flags:
            raise ValueError(f"shape {self.shape} inconsistent with sub-case {self.sub_case!r}")
        if self.branch not in (None, "+", "-"):
            raise ValueError(f"branch must be '+', '-' or None, got {self.branch!r}")
        object.__setattr__(self, "flags", frozenset(self.flags))

    @property
    def effective(self) -> Shape:
        """The shape to report: empirical resolution if there is one."""
        return self.resolved if self.resolved is not None else self.shape

    def as_dict(self) -> dict:
        return {
            "class": self.effective.value,
            "analytic_class": self.shape.value,
            "sub_case": self.sub_case,
            "branch": self.branch,
            "flags": sorted(self.flags),
        }


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Time-sampled particle path.

    Columns are stored as separate float arrays; :attr:`samples` stacks them
    as ``(n, 5)`` rows of ``(t, x, z, u, v)``.
    """

    t: np.ndarray
    x: np.ndarray
    z: np.ndarray
    u: np.ndarray
    v: np.ndarray
    config: FlowConfig
    init: ParticleState
    cls: TrajectoryClass | None = None
    period: float | None = None
    drift: float | None = None

    def __post_init__(self):
        cols = [np.array(c, dtype=float) for c in (self.t, self.x, self.z, self.u, self.v)]
        n = len(cols[0])
        if any(len(c) != n for c in cols):
            raise ValueError("trajectory columns differ in length")
        if n > 1 and not np.all(np.diff(cols[0]) > 0):
            raise ValueError("sample times must be strictly increasing")
        for name, c in zip("txzuv", cols):
            c.setflags(write=False)
            object.__setattr__(self, name, c)

    @classmethod
    def from_path(cls, t, x, z, config: FlowConfig, init: ParticleState, /, **meta) -> Trajectory:
        """Build a trajectory, filling ``u, v`` from the velocity field."""
        t = np.asarray(t, dtype=float)
        x = np.asarray(x, dtype=float)
        z = np.asarray(z, dtype=float)
        fs = _field(x, z, t, config)
        return cls(t, x, z, fs.u, fs.v, config, init, **meta)

    def __len__(self):
        return len(self.t)

    @property
    def samples(self) -> np.ndarray:
        return np.column_stack([self.t, self.x, self.z, self.u, self.v])

    def replace(self, **changes) -> Trajectory:
        kw = dict(t=self.t, x=self.x, z=self.z, u=self.u, v=self.v, config=self.config,
                  init=self.init, cls=self.cls, period=self.period, drift=self.drift)
        kw.update(changes)
        return Trajectory(**kw)

    def x_at(self, t):
        """Cubic Hermite interpolation of ``x`` using the stored velocity ``u``."""
        return _hermite(self.t, self.x, self.u, t)

    def z_at(self, t):
        return _hermite(self.t, self.z, self.v, t)


def _hermite(ts, ys, dys, t):
    t = np.asarray(t, dtype=float)
    i = np.clip(np.searchsorted(ts, t, side="right") - 1, 0, len(ts) - 2)
    h = ts[i + 1] - ts[i]
    s = (t - ts[i]) / h
    h00 = (1 + 2 * s) * (1 - s) ** 2
    h10 = s * (1 - s) ** 2
    h01 = s * s * (3 - 2 * s)
    h11 = s * s * (s - 1)
    return h00 * ys[i] + h10 * h * dys[i] + h01 * ys[i + 1] + h11 * h * dys[i + 1]
