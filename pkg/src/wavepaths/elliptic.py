"""Elliptic integral of the first kind, Jacobi functions, Legendre reductions.

Everything here is parametrised by ``k2`` (the modulus squared, often
written ``m``).  The integrals are evaluated with the arithmetic-geometric
mean: descending Landen transformations for ``F(phi, k)`` and the classical
AGM scheme for ``sn, cn, dn``.

The reductions bring

    int dy / sqrt(C (y^2+1)^2 - 4 pi^2 c0 (y^2+1) + 4 pi^2)

to Legendre normal form through ``w = y^2`` and ``w = S tan^2(phi/2)``,
``S = sqrt(1 + 4 pi^2 / C - 4 pi^2 c0 / C)``.  Working the substitution
through gives

    int_0^Y dy / sqrt(quartic) = F(phi(Y), k) / (2 sqrt(C S)),
    phi(Y) = 2 arctan(Y / sqrt(S)),

so the full traversal ``y: -inf -> inf`` takes ``2 K(k) / sqrt(C S)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConditionViolated, DegenerateConstant, ModulusOutOfRange

PI = math.pi
_MAX_ITER = 40
_RTOL = 1e-15


def _check_modulus(k2, allow_one=False):
    ok = 0.0 <= k2 <= 1.0 if allow_one else 0.0 <= k2 < 1.0
    if not ok:
        rng = "[0, 1]" if allow_one else "[0, 1)"
        raise ModulusOutOfRange(f"k^2 = {k2} outside {rng}")


def agm(a: float, b: float) -> float:
    for _ in range(_MAX_ITER):
        if abs(a - b) <= _RTOL * a:
            break
        a, b = 0.5 * (a + b), math.sqrt(a * b)
    return 0.5 * (a + b)


def ellipk(k2: float) -> float:
    """Complete integral ``K(k) = F(pi/2, k)``."""
    _check_modulus(k2)
    return PI / (2.0 * agm(1.0, math.sqrt(1.0 - k2)))


def _f_reduced(phi: float, k2: float) -> float:
    # phi in [-pi/2, pi/2]
    a, b = 1.0, math.sqrt(1.0 - k2)
    two_n = 1.0
    for _ in range(_MAX_ITER):
        if abs(a - b) <= _RTOL * a:
            break
        # tan(phi_{n+1} - phi_n) = (b/a) tan(phi_n), branch kept next to phi_n
        phi = phi + math.atan(b / a * math.tan(phi)) + PI * round(phi / PI)
        a, b = 0.5 * (a + b), math.sqrt(a * b)
        two_n *= 2.0
    return phi / (two_n * 0.5 * (a + b))


def elliptic_f(phi: float, k2: float) -> float:
    """Incomplete integral ``F(phi, k) = int_0^phi dt / sqrt(1 - k2 sin^2 t)``."""
    _check_modulus(k2)
    if k2 == 0.0:
        return float(phi)
    j = round(phi / PI)
    rest = phi - j * PI
    out = _f_reduced(rest, k2)
    if j:
        out += 2.0 * j * ellipk(k2)
    return out


def jacobi(u: float, k2: float) -> tuple[float, float, float]:
    """Return ``(sn, cn, dn)`` of ``u`` for parameter ``k2``."""
    _check_modulus(k2, allow_one=True)
    if k2 == 0.0:
        return math.sin(u), math.cos(u), 1.0
    if k2 == 1.0:
        sech = 1.0 / math.cosh(u)
        return math.tanh(u), sech, sech
    K = ellipk(k2)
    u = u - 4.0 * K * round(u / (4.0 * K))

    a_s = [1.0]
    c_s = [math.sqrt(k2)]
    b = math.sqrt(1.0 - k2)
    for _ in range(_MAX_ITER):
        a = a_s[-1]
        if abs(c_s[-1]) <= _RTOL * a:
            break
        a_s.append(0.5 * (a + b))
        c_s.append(0.5 * (a - b))
        b = math.sqrt(a * b)
    n = len(a_s) - 1
    phi = (2.0 ** n) * a_s[n] * u
    prev = phi
    for i in range(n, 0, -1):
        prev = phi
        phi = 0.5 * (phi + math.asin(c_s[i] / a_s[i] * math.sin(phi)))
    sn, cn = math.sin(phi), math.cos(phi)
    if n == 0:
        return sn, cn, 1.0
    dn = cn / math.cos(prev - phi)
    return sn, cn, dn


def jacobi_sn(u: float, k2: float) -> float:
    return jacobi(u, k2)[0]


def jacobi_cn(u: float, k2: float) -> float:
    return jacobi(u, k2)[1]


def jacobi_dn(u: float, k2: float) -> float:
    return jacobi(u, k2)[2]


@dataclass(frozen=True)
class EllipticReduction:
    """Legendre normal form of the first-integral quadrature.

    ``prefactor * F(phi, k)`` equals ``int_0^Y dy / sqrt(quartic(y))`` with
    ``Y^2 = subst_const * tan^2(phi / 2)``.
    """

    k_squared: float
    prefactor: float
    subst_const: float
    C: float
    c0: float

    def quartic(self, y):
        W = np.square(y) + 1.0
        return self.C * W * W - 4.0 * PI**2 * self.c0 * W + 4.0 * PI**2

    def angle(self, Y: float) -> float:
        """Legendre angle ``phi`` belonging to the upper limit ``Y``."""
        return 2.0 * math.atan(Y / math.sqrt(self.subst_const))

    def integral(self, Y: float) -> float:
        """``int_0^Y dy / sqrt(quartic(y))``, signed (odd in ``Y``)."""
        return self.prefactor * elliptic_f(self.angle(Y), self.k_squared)

    def half_traversal(self) -> float:
        """``int_0^inf dy / sqrt(quartic(y))``."""
        return 2.0 * self.prefactor * ellipk(self.k_squared)


def legendre_reduce_general(C: float, c0: float) -> EllipticReduction:
    if not C > PI**2 * c0**2:
        raise ConditionViolated(f"C = {C} must exceed pi^2 c0^2 = {PI**2 * c0**2}")
    S = math.sqrt(1.0 + 4.0 * PI**2 / C - 4.0 * PI**2 * c0 / C)
    k2 = 0.5 * (1.0 - (C - 2.0 * PI**2 * c0) / (C * S))
    return EllipticReduction(k_squared=k2, prefactor=1.0 / (2.0 * math.sqrt(C * S)),
                             subst_const=S, C=C, c0=c0)


def legendre_reduce_zero_current(A: float) -> EllipticReduction:
    if A == 0.0 or not math.isfinite(A):
        raise DegenerateConstant(f"integration constant A = {A} gives no elliptic reduction")
    A2 = A * A
    S = math.sqrt(1.0 + 4.0 * PI**2 / A2)
    k2 = 0.5 * (1.0 - 1.0 / S)
    return EllipticReduction(k_squared=k2, prefactor=1.0 / (2.0 * abs(A) * math.sqrt(S)),
                             subst_const=S, C=A2, c0=0.0)
