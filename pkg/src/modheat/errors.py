"""Exception hierarchy shared by every module.

The CLI maps these onto exit codes: DomainError (and subclasses) -> 2,
NoConvergence -> 3.
"""


class ModHeatError(Exception):
    pass


class DomainError(ModHeatError, ValueError):
    pass


class PoleAtC(DomainError):
    """Lower parameter c sits on a non-positive integer."""


class NoConvergence(ModHeatError, ArithmeticError):
    pass


class DerivativeUnavailable(ModHeatError):
    pass


class UnsupportedDerivative(ModHeatError):
    pass


class UnsupportedJ(DomainError):
    pass


class UnsupportedXiDegree(ModHeatError):
    pass


class MalformedWord(ModHeatError, ValueError):
    pass
