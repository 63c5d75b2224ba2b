"""Densities of omega/Omega statistics of (p-1)/ord_p(a), predicted and measured."""
__version__ = "0.1.0"

from .arith import BaseDecomposition, decompose
from .errors import (
    ArtinError,
    DomainError,
    InternalError,
    MismatchError,
    PoleAtOrigin,
    PoleAtPoint,
    PoleError,
    ResourceError,
)
from .kummer import DegreeQuery, degree, epsilon, kummer_degree
from .statistic import StatisticKind
