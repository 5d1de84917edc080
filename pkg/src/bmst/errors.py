"""Exception types shared across the workbench."""


class WorkbenchError(Exception):
    """Base class for errors raised by this package."""


class InputShapeError(WorkbenchError):
    """An array argument has the wrong shape or length."""


class NumericInputError(WorkbenchError):
    """A numeric argument is non-finite or outside its legal range."""


class DomainError(WorkbenchError):
    """A scalar argument lies outside the function's domain."""


class CapacityError(WorkbenchError):
    """A requested dense construction exceeds the guarded size limit."""


class DesignError(WorkbenchError):
    """Design inputs are inconsistent (e.g. target above the limit)."""


class ExtrapolationError(WorkbenchError):
    """A tabulated curve was queried outside its tabulated range."""


class LiftError(WorkbenchError):
    """Protograph lifting could not satisfy its structural constraints."""


class ConfigError(WorkbenchError):
    """A simulation configuration is missing keys or has bad values."""


class NoThresholdError(WorkbenchError):
    """No decodable Eb/N0 was found inside the search bracket."""
