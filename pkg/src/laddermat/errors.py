"""Exception hierarchy shared by every module."""


class LadderMatError(Exception):
    """Base class for all errors raised by this package."""


class DimensionError(LadderMatError, ValueError):
    pass


class DomainError(LadderMatError, ValueError):
    """A matrix has non-zero entries where the ladder forbids them."""


class ValidationError(LadderMatError, ValueError):
    pass


class ResourceError(LadderMatError, RuntimeError):
    """A configurable work budget was exhausted."""


class GenerationError(LadderMatError, RuntimeError):
    """Rejection sampling ran out of attempts."""


class PreconditionError(LadderMatError, ValueError):
    pass
