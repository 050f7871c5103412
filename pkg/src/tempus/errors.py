"""Exception hierarchy.

Every error raised by the numerical modules derives from :class:`TempusError`
and carries an ``exit_code`` used by the command-line front end:
3 for malformed input data, 4 for numerical-domain failures.
"""


class TempusError(Exception):
    exit_code = 4


class InvalidModel(TempusError, ValueError):
    """Model parameters violate a field invariant."""


class PoleHit(TempusError, ArithmeticError):
    """Evaluation requested at (or within tolerance of) a pole."""

    def __init__(self, message, pole=None):
        super().__init__(message)
        self.pole = pole


class DomainError(TempusError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class PhaseJump(TempusError, ArithmeticError):
    """Adjacent phase step too large to unwrap unambiguously."""


class ZeroResponse(TempusError, ArithmeticError):
    """Response magnitude underflows; the log-derivative is undefined."""


class ResolventSingular(TempusError, ArithmeticError):
    pass


class NonPhysical(TempusError, ArithmeticError):
    pass


class DenominatorCollapse(TempusError, ArithmeticError):
    """A kinetic denominator such as ``ell + c*tau2`` is not positive."""


class NoProgress(DenominatorCollapse):
    """Saltatory transport cannot advance (``ell + c*tau2 <= 0``)."""


class GridGap(TempusError, ValueError):
    pass


class InconsistentRelations(TempusError, ArithmeticError):
    pass


class MissingParameter(TempusError, ValueError):
    pass


class NoBarrier(TempusError, ValueError):
    """Energy at or above the barrier maximum: no tunneling region."""


class QuadratureFail(TempusError, ArithmeticError):
    pass


class GridTooCoarse(TempusError, ValueError):
    pass


class NoPeak(TempusError, ArithmeticError):
    pass


class AtPole(TempusError, ArithmeticError):
    """Running coupling evaluated at its Landau pole."""


class RateOverflow(TempusError, OverflowError):
    pass


class InputFormatError(TempusError, ValueError):
    """Malformed data file; ``row`` is the 1-based data row when known."""

    exit_code = 3

    def __init__(self, message, row=None):
        super().__init__(message)
        self.row = row
