"""Exception hierarchy shared by every module.

The CLI maps :class:`ConfigError` to exit code 2 and every other
:class:`QgaForgeError` to exit code 1.
"""


class QgaForgeError(Exception):
    pass


class ConfigError(QgaForgeError):
    """A configuration value is invalid. ``field`` names the offending key."""

    def __init__(self, message, field=None):
        super().__init__(message)
        self.field = field


class ShapeError(QgaForgeError, ValueError):
    pass


class DomainError(QgaForgeError, ValueError):
    pass


class QuantizationError(QgaForgeError, ValueError):
    pass


class InvalidOracleError(QgaForgeError, ValueError):
    pass


class InvalidInputError(QgaForgeError, ValueError):
    pass
