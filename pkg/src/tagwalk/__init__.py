"""Pollard-rho style r-adding walks and tag tracing in prime-order subgroups of GF(2^eta)^*."""

from .errors import (
    ConfigurationError,
    DomainError,
    InternalInconsistencyError,
    ParameterError,
    SizingError,
    TagWalkError,
)
from .gf2 import GF2Field, IrreduciblePoly, find_irreducible
from .group import DlpInstance, GroupParams, make_instance, make_params, validate
from .modified import ModifiedWalk, solve_dlp_modified
from .walk import OriginalWalk, solve_dlp_original

__version__ = "0.1.0"
