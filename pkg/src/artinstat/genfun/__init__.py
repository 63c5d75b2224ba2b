"""Exact generating-function correction factors."""
from fractions import Fraction

from ..statistic import StatisticKind
from .factors import CorrectionFactors, classical_artin_factor, correction_factors, euler_factor
from .poly import Poly, RationalFunction, Z


def taylor_coefficients(rf: RationalFunction, N: int) -> list[Fraction]:
    return rf.taylor(N)


def derivative_at(rf: RationalFunction, z0) -> Fraction:
    return rf.derivative_at(z0)


def evaluate(rf: RationalFunction, z0) -> Fraction:
    return rf.evaluate(z0)


__all__ = [
    "CorrectionFactors",
    "Poly",
    "RationalFunction",
    "StatisticKind",
    "Z",
    "classical_artin_factor",
    "correction_factors",
    "derivative_at",
    "euler_factor",
    "evaluate",
    "taylor_coefficients",
]
