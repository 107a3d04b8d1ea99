class LabelSemError(Exception):
    """Base class for package errors."""


class InputError(LabelSemError, ValueError):
    pass


class ResourceError(LabelSemError):
    """Raised when an exhaustive computation would exceed its size cap."""


class UnsupportedStructureError(LabelSemError):
    pass


class ConfigError(LabelSemError, ValueError):
    def __init__(self, field, message):
        self.field = field
        super().__init__(f"{field}: {message}")
