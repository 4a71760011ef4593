"""Exception types raised by the library."""


class OrthoPosetError(Exception):
    """Base class for every error raised by this package."""


class OrderError(OrthoPosetError, ValueError):
    """The supplied relation is not a partial order."""


class CycleError(OrderError):
    """Two distinct elements end up below each other."""


class BoundsError(OrderError):
    """The designated bottom/top are not least/greatest."""


class ValidationError(OrthoPosetError, ValueError):
    """A structure violates the involution or complementation laws."""


class ParseError(OrthoPosetError, ValueError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class UnknownFixtureError(OrthoPosetError, KeyError):
    pass


class EmptyFamilyError(OrthoPosetError, ValueError):
    pass


class FeasibilityError(OrthoPosetError):
    """Exhaustive enumeration was requested beyond the configured size cap."""
