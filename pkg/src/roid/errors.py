"""Exception and warning types raised across the package."""


class ModeError(ValueError):
    """Tensor mode outside {1, 2, 3}."""


class DimensionError(ValueError):
    """Operand shapes are incompatible."""


class RangeError(ValueError):
    """A scalar or integer argument lies outside its admissible range."""


class ConfigError(ValueError):
    """Inconsistent solver or experiment configuration."""


class DegenerateInputError(ValueError):
    """Input for which the requested quantity is undefined (e.g. zero norm)."""


class InputError(ValueError):
    """Malformed numerical input (NaN/Inf, asymmetric Laplacian, ...)."""


class ParseError(ValueError):
    """Malformed tensor or observation file."""

    def __init__(self, message, lineno=None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class ValidationError(ValueError):
    """Well-formed file content that violates the declared dimensions."""


class NonUniquePolarWarning(RuntimeWarning):
    """Polar factor requested for a rank-deficient matrix; result is one of many."""
