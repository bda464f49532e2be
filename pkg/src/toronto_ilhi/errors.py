"""Exception types shared by the evaluators."""


class DomainError(ValueError):
    """Arguments fall outside the domain of the requested representation."""


class ClosedFormUnavailable(DomainError):
    """No finite closed form exists for these parameters; use the oracle."""


class ConvergenceError(ArithmeticError):
    """A series hit its term cap before meeting the stopping rule."""

    def __init__(self, message, partial_sum=None, terms=None):
        super().__init__(message)
        self.partial_sum = partial_sum
        self.terms = terms


class ToleranceNotMet(ArithmeticError):
    """Adaptive quadrature ran out of subdivisions; best estimate attached."""

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result
