class DomainError(ArithmeticError):
    """Evaluation left the real domain (pole, log of non-positive, ...)."""


class UnboundVariable(NameError):
    pass


class NotRepresentable(ValueError):
    """Exact evaluation left the a + b*sqrt(n) field."""


class UnsupportedDerivative(ValueError):
    pass
