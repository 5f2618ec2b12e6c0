"""Exception types shared across the package."""


class ParameterError(ValueError):
    """A weight/family parameter is outside its admissible range."""


class ArgumentError(ValueError):
    """An argument (degree, point, ...) violates a precondition."""


class CapabilityError(NotImplementedError):
    """The requested combination is valid mathematics but not provided here."""
