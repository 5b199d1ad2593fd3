"""Exception types raised by the engine."""


class EthplanError(Exception):
    """Base class for domain-level errors (CLI exit status 1)."""


class UnknownAction(EthplanError, ValueError):
    pass


class UndeclaredName(EthplanError, ValueError):
    pass


class NonPropositionalEffect(EthplanError, ValueError):
    pass


class MoralityOutOfRange(EthplanError, ValueError):
    pass


class MismatchedContext(EthplanError, ValueError):
    """Two moral problems do not share their action theory and initial state."""


class BaseMismatch(EthplanError, ValueError):
    """The union of a value base differs from the problem's value set."""


class UniverseTooLarge(EthplanError, ValueError):
    pass
