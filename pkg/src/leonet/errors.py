"""Exception hierarchy shared by the library and the command-line driver."""


class LeonetError(Exception):
    """Base class for all errors raised by leonet."""


class ConfigurationError(LeonetError, ValueError):
    """A shell, link policy or simulation configuration is invalid."""


class DataError(LeonetError, ValueError):
    """An input file (station catalog, config document) could not be used."""


class UndefinedGeometryError(LeonetError, ValueError):
    """A geometric quantity has no meaning for the given arguments."""


class UndefinedMetricError(LeonetError, ValueError):
    """A graph metric is not defined for the given input."""


class InvariantError(LeonetError, RuntimeError):
    """An internal consistency check failed. Always indicates a bug."""
