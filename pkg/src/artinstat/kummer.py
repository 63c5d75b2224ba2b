"""Degrees of the cyclotomic-Kummer fields Q(a**(1/l), zeta_{m l}).

The degree is ``l' * phi(m l) / eps`` with ``l' = l / gcd(l, h)`` and a
correction ``eps`` in {1/2, 1, 2} read off a case table keyed on the sign of
``a``, the 2-adic valuations of ``l`` and ``h``, and which quadratic
discriminants built from ``a0`` divide ``m l``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .arith import BaseDecomposition, _int_val, decompose, euler_phi
from .errors import DomainError, InternalError

HALF = Fraction(1, 2)
ONE = Fraction(1)
TWO = Fraction(2)


@dataclass(frozen=True)
class DegreeQuery:
    base: BaseDecomposition
    ell: int
    m: int = 1

    def __post_init__(self):
        if self.ell < 1 or self.m < 1:
            raise DomainError(f"ell and m must be positive, got {self.ell}, {self.m}")

    @property
    def ell_prime(self) -> int:
        return self.ell // math.gcd(self.ell, self.base.h)

    @classmethod
    def of(cls, a, ell: int, m: int = 1) -> "DegreeQuery":
        base = a if isinstance(a, BaseDecomposition) else decompose(a)
        return cls(base, ell, m)


def _divides(d: int, n: int) -> bool:
    # a negative discriminant divides n iff its absolute value does
    return n % abs(d) == 0


def epsilon(q: DegreeQuery) -> Fraction:
    base, ell, m = q.base, q.ell, q.m
    ml = m * ell
    v_ell, v_h = _int_val(ell, 2), base.nu2_h
    # l' = l / (l, h), so nu_2(l') = max(nu_2(l) - nu_2(h), 0)
    v_lp = max(v_ell - v_h, 0)

    if base.sign > 0:
        if v_lp >= 1 and _divides(base.disc_a0, ml):
            return TWO
        return ONE

    if v_ell == 0:
        return ONE
    if v_lp == 0:
        return ONE if m % 2 == 0 else HALF
    if v_lp == 1:
        if m % 2 == 0:
            return TWO if _divides(base.disc_a0, ml) else ONE
        if v_ell == 1:
            return TWO if _divides(base.disc_neg_a0, ml) else ONE
        if v_ell == 2:
            return TWO if _divides(base.disc_2a0, ml) else ONE
        return ONE
    return TWO if _divides(base.disc_a0, ml) else ONE


def kummer_degree(q: DegreeQuery) -> int:
    eps = epsilon(q)
    deg = q.ell_prime * euler_phi(q.m * q.ell) / eps
    if deg.denominator != 1:
        raise InternalError(f"non-integral degree {deg} for {q}")
    return int(deg)


def degree(a, ell: int, m: int = 1) -> int:
    """Convenience wrapper: ``[Q(a**(1/ell), zeta_{m ell}) : Q]``."""
    return kummer_degree(DegreeQuery.of(a, ell, m))
