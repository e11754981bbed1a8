from django.core.exceptions import ValidationError


class WorkbenchError(Exception):
    pass


class QuadratureError(WorkbenchError):
    """Numerical integral did not reach the requested tolerance."""


class InsufficientSamples(WorkbenchError):
    pass


class InsufficientAcceptance(WorkbenchError):
    """Conditioning accepted fewer trials than the operation needs."""

    def __init__(self, message, accepted=0, attempted=0):
        super(InsufficientAcceptance, self).__init__(message)
        self.accepted = accepted
        self.attempted = attempted


class GridRangeError(WorkbenchError):
    pass


class ParameterOverflow(WorkbenchError):
    pass


class PopulationOverflow(WorkbenchError):
    pass


class FamilyMismatch(WorkbenchError):
    pass


class StateSpaceTooLarge(WorkbenchError):
    pass


class BudgetExhausted(WorkbenchError):
    """Trial budget ran out; partial results travel with the exception."""

    def __init__(self, message, partial=None):
        super(BudgetExhausted, self).__init__(message)
        self.partial = partial


class ConfigError(ValidationError, WorkbenchError):
    pass
