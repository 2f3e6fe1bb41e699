"""Exception hierarchy shared by every module."""


class FadingDpcError(Exception):
    """Base class for all errors raised by this package."""


class ConfigurationError(FadingDpcError, ValueError):
    """An object was built with inconsistent or unsupported parameters."""


class PreconditionError(FadingDpcError, ValueError):
    """A formula was evaluated outside the parameter range where it holds."""


class InputError(FadingDpcError, ValueError):
    """A caller-supplied vector is not of the expected form."""


class NumericalError(FadingDpcError, ArithmeticError):
    """Non-finite values, ill-conditioned solves, or non-converging moments."""


class ResourceError(FadingDpcError, RuntimeError):
    """A requested enumeration exceeds its configured size cap."""
