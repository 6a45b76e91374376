"""Exception hierarchy shared by all zlab modules."""


class ZlabError(Exception):
    pass


class DomainError(ZlabError, ValueError):
    """An argument lies outside the domain where the operation is defined."""


class PoleError(DomainError):
    pass


class ParseError(ZlabError, ValueError):
    def __init__(self, message, lineno=None):
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)
        self.lineno = lineno


class ComputationError(ZlabError):
    """A computation finished but its result failed a sanity check."""
