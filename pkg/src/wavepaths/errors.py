"""Exception types raised across the package.

Errors derived from :class:`InputError` mean the caller must change the
input (perturb ``x0``, pick another constant, ...).  Errors derived from
:class:`NumericalError` mean a numerical procedure could not deliver the
requested accuracy.
"""


class WavePathsError(Exception):
    """Base class for every error raised by this package."""


class InputError(WavePathsError, ValueError):
    pass


class NumericalError(WavePathsError, ArithmeticError):
    pass


class DegeneratePhase(InputError):
    """``x0`` is an integer, so ``cot(pi*x0)`` is undefined."""


class BranchBoundary(InputError):
    """Initial data sits on the separatrix ``|cot(pi*x0)| = K0``."""


class DegenerateBranch(InputError):
    """``y'(0) = 0`` and ``y''(0) = 0``: the particle starts at a fixed point."""


class DegenerateConstant(InputError):
    pass


class ConditionViolated(InputError):
    """The first integral does not satisfy ``C > pi^2 c0^2``."""


class ModulusOutOfRange(InputError):
    pass


class EmptyTrajectory(InputError):
    pass


class SpanTooShort(InputError):
    pass


class QuadratureFailure(NumericalError):
    pass


class StepTooLarge(NumericalError):
    """Fixed-step integration kept violating the first-integral budget."""


class ToleranceNotMet(NumericalError):
    pass


class PeriodNotFound(NumericalError):
    pass
