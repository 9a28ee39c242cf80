"""Exception hierarchy shared by all l1conc modules."""


class ValidationError(ValueError):
    """An input violates a structural precondition (shape, sign, sum)."""


class DomainError(ValueError):
    """A numeric argument lies outside the domain of a closed-form formula."""


class CapacityError(RuntimeError):
    """An exact computation was requested on an instance too large to enumerate."""


class ConfigError(ValueError):
    """An experiment configuration is syntactically or semantically invalid."""
