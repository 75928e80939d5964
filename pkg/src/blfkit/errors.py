"""Exception hierarchy shared by all blfkit modules."""


class BlfkitError(Exception):
    """Base class for every error raised by blfkit."""


class UnsupportedConfiguration(BlfkitError):
    pass


class UnknownGenerator(BlfkitError):
    pass


class SeparatingCurve(BlfkitError):
    pass


class NotACurve(BlfkitError):
    pass


class ModelMismatch(BlfkitError):
    pass


class EndpointMismatch(BlfkitError):
    pass


class NotSeparating(BlfkitError):
    pass


class NotInSc(BlfkitError):
    pass


class CrossesC(BlfkitError):
    pass


class NotInDomain(BlfkitError):
    pass


class BadConfiguration(BlfkitError):
    pass


class IndexOutOfRange(BlfkitError):
    pass


class EmptyCycles(BlfkitError):
    pass


class NotTorelli(BlfkitError):
    pass


class NotApplicable(BlfkitError):
    pass


class BadParams(BlfkitError):
    pass


class TransportUnsupported(BlfkitError):
    """Raised when a non-standard round cycle cannot be moved onto the
    model's distinguished capping curve within the search budget."""


class ParseError(BlfkitError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"line {line}" + (f", col {column}" if column else "") + f": {message}"
        super().__init__(message)


class UnknownName(ParseError):
    pass


class GenusMismatch(ParseError):
    pass


class CIsSeparating(ParseError):
    pass


class InternalError(BlfkitError):
    """Invariant violation inside blfkit itself; always a bug."""
