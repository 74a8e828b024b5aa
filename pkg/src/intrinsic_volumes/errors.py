"""Exception types shared across the package."""


class DomainError(ValueError):
    """Argument outside the domain of an operation."""


class UnsupportedError(DomainError):
    """Parameter combination for which no closed form is available."""


class BudgetError(RuntimeError):
    """Enumeration or hull size above the configured work budget."""


class NonFiniteDrawError(FloatingPointError):
    """A Monte Carlo sampler produced a NaN or infinite draw."""


class IllConditionedError(ArithmeticError):
    """A least-squares fit was too ill-conditioned to trust."""
