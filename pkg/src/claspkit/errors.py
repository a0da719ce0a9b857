"""Exception hierarchy shared by all claspkit modules."""


class ClaspError(Exception):
    """Base class for every error raised by claspkit."""


class ParseError(ClaspError, ValueError):
    """Malformed diagram, word or rule text."""


class DomainError(ClaspError, ValueError):
    """Well-formed input that violates a structural invariant or a move precondition."""


class ResourceError(ClaspError, RuntimeError):
    """A configured size cap was exceeded."""


class ConfigError(ClaspError, RuntimeError):
    """Required configuration (such as a C4 rule) is missing or invalid."""


class OracleMismatch(ClaspError, AssertionError):
    """Two independent computations of the same quantity disagree."""
