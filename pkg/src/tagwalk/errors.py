"""Exception hierarchy shared by the library and the command line."""


class TagWalkError(Exception):
    """Base class; ``exit_code`` is what the CLI returns for it."""

    exit_code = 1


class ParameterError(TagWalkError, ValueError):
    exit_code = 3


class FormatError(ParameterError):
    pass


class DomainError(TagWalkError, ArithmeticError):
    exit_code = 3


class ConfigurationError(TagWalkError):
    exit_code = 3


class SizingError(TagWalkError):
    exit_code = 4


class InternalInconsistencyError(TagWalkError):
    exit_code = 5


class NoSparseIrreducibleError(TagWalkError):
    exit_code = 3


class DegenerateCollision(TagWalkError):
    """Two colliding points with equal ``beta`` give no information about x."""


class FullProductRequired(TagWalkError):
    """A pending product of maximal length has no outgoing transition."""


class KeyNotFound(TagWalkError, KeyError):
    pass
