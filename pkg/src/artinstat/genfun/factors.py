"""Correction factors F and H multiplying the universal Euler products.

For each statistic the limiting generating function of the densities is

    sum_n D_a(n) z^n = F_a(z) * H_a(z) * prod_q f(q, z)

with ``f`` the per-prime factor from :func:`euler_factor`.  ``H`` collects
the primes dividing ``h``; ``F`` carries the 2-adic and quadratic
entanglement corrections.  Everything is built as exact rational functions.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from ..arith import BaseDecomposition, _int_val, decompose, discriminant, euler_phi, factorint
from ..statistic import StatisticKind
from .poly import RationalFunction, Z

ONE = RationalFunction.const(1)


def _c(x) -> RationalFunction:
    return RationalFunction.const(Fraction(x))


@dataclass(frozen=True)
class CorrectionFactors:
    statistic: StatisticKind
    F: RationalFunction
    H: RationalFunction

    @property
    def combined(self) -> RationalFunction:
        return self.F * self.H


def euler_factor(stat: StatisticKind, q: int) -> RationalFunction:
    """The per-prime factor of the universal product for ``stat``."""
    if stat is StatisticKind.OMEGA_QUOTIENT:
        return 1 + (Z - 1) / (q * (q - 1))
    if stat is StatisticKind.BIG_OMEGA_QUOTIENT:
        return (q**3 - q**2 - q + Z) / ((q - 1) * (q**2 - Z))
    return 1 + (Z - 1) / (q * q - 1)


# ---------------------------------------------------------------------------
# omega((p-1)/ord)


def _omega_quotient(base: BaseDecomposition) -> CorrectionFactors:
    h, b0 = base.h, base.b0
    H = ONE
    for q in factorint(h):
        if q != 2:
            H = H * (q * (q + Z - 2)) / (q * q - q + Z - 1)

    if h % 2 == 0:
        F = 2 * Z / (Z + 1) if base.sign > 0 else ONE
    elif (base.sign * b0) % 4 == 1:
        f = ONE
        for q in factorint(2 * b0):
            if h % q:
                f = f * (Z - 1) / (q * q - q + Z - 1)
        for q in factorint(math.gcd(b0, h)):
            f = f * (Z - 1) / (q + Z - 2)
        F = 1 + f
    else:
        F = ONE
    return CorrectionFactors(StatisticKind.OMEGA_QUOTIENT, F, H)


# ---------------------------------------------------------------------------
# Omega((p-1)/ord)


def _omega_h_block(q: int, nu: int) -> RationalFunction:
    # q^4 - 2q^3 + 2qz - z^2 - (z-1)(q-1) z^nu q^(2-nu)
    return q**4 - 2 * q**3 + 2 * q * Z - Z * Z - (Z - 1) * (q - 1) * Z**nu * _c(Fraction(q) ** (2 - nu))


def big_omega_H(h: int) -> RationalFunction:
    H = ONE
    for q, nu in factorint(h).items():
        H = H * _omega_h_block(q, nu) / ((q - Z) * (q**3 - q**2 - q + Z))
    return H


def big_omega_I(h: int, gamma: int) -> RationalFunction:
    primes = factorint(gamma)
    out = (Z - 1) ** len(primes) * _c(Fraction(math.gcd(gamma, h), gamma * euler_phi(gamma)))
    for q in primes:
        nu = _int_val(h, q)
        nu_red = _int_val(h // math.gcd(h, q), q)
        top = (q - 1) * (q**3 - q * Z - (q - 1) * Z ** (nu_red + 1) * _c(Fraction(q) ** (1 - nu_red)))
        out = out * top / _omega_h_block(q, nu)
    return out


def _big_omega_tau(base: BaseDecomposition, positive: bool) -> RationalFunction:
    b0mod, nu = base.b0 % 4, base.nu2_h
    if positive:
        if b0mod == 3 and nu == 0:
            return Z / 2
        if b0mod == 2 and nu == 0:
            return Z * Z / 8
        if b0mod == 2 and nu == 1:
            return Z * Z / 4
        return Z**nu / _c(Fraction(2) ** (nu - 1))
    if b0mod == 3 and nu == 0:
        return _c(2)
    if b0mod == 2 and nu == 0:
        return Z * Z / 8
    if b0mod == 2 and nu == 1:
        return Z
    return (Z / 2) ** (nu + 1)


def big_omega_g_infinity(nu2: int) -> RationalFunction:
    """Limit of the 2-adic partial sums; appears as a denominator in F."""
    return (4 * Z - Z * Z - 4 * (Z - 1) * (Z / 2) ** nu2) / ((Z - 2) * (Z - 4))


def _big_omega(base: BaseDecomposition) -> CorrectionFactors:
    nu = base.nu2_h
    H = big_omega_H(base.h)
    I = big_omega_I(base.h, base.gamma)
    lead = (Z - 1) * (Z - 2) * (Z - 4) / (4 * Z - Z * Z - 4 * (Z - 1) * (Z / 2) ** nu)
    tail = I * _big_omega_tau(base, base.sign > 0) / (4 - Z)
    if base.sign < 0:
        tail = tail + (1 - (Z / 2) ** nu) / (Z - 2)
    return CorrectionFactors(StatisticKind.BIG_OMEGA_QUOTIENT, 1 + lead * tail, H)


# ---------------------------------------------------------------------------
# omega(p-1) - omega(ord)


def _geom(q: int, nu: int) -> Fraction:
    # (q^2-1) * sum_{k>=1} (q^k, q^nu) / q^(2k)
    return q + 1 - Fraction(q) ** (1 - nu)


def omega_diff_H(h: int) -> RationalFunction:
    H = ONE
    for q, nu in factorint(h).items():
        H = H * (q * q - 1 + (Z - 1) * _geom(q, nu)) / (q * q + Z - 2)
    return H


def omega_diff_I(h: int, gamma: int) -> RationalFunction:
    primes = factorint(gamma)
    out = (Z - 1) ** len(primes) * _c(Fraction(math.gcd(gamma, h), gamma))
    for q in primes:
        nu = _int_val(h, q)
        nu_red = _int_val(h // math.gcd(h, q), q)
        top = _c(q + 1 - Fraction(q) ** (-nu_red))
        out = out * top / (q * q - 1 + (Z - 1) * _geom(q, nu))
    return out


def _omega_diff_tau(base: BaseDecomposition, positive: bool) -> Fraction:
    b0mod, nu = base.b0 % 4, base.nu2_h
    if positive:
        if b0mod == 3 and nu == 0:
            return Fraction(-1, 2)
        if b0mod == 2 and nu == 0:
            return Fraction(-1, 8)
        if b0mod == 2 and nu == 1:
            return Fraction(-1, 4)
        return Fraction(1, 2**nu)
    if b0mod == 3 and nu == 0:
        return Fraction(1)
    if b0mod == 2 and nu == 0:
        return Fraction(-1, 8)
    if b0mod == 2 and nu == 1:
        return Fraction(1, 2)
    return Fraction(-1, 2 ** (nu + 1))


def omega_diff_g_infinity(nu2: int) -> RationalFunction:
    return 1 + (Z - 1) * (1 - Fraction(2) ** (1 - nu2) / 3)


def _omega_diff(base: BaseDecomposition) -> CorrectionFactors:
    nu = base.nu2_h
    H = omega_diff_H(base.h)
    I = omega_diff_I(base.h, base.gamma)
    tail = I * _omega_diff_tau(base, base.sign > 0) / 3
    if base.sign < 0:
        tail = tail + (Fraction(1, 2**nu) - 1)
    F = 1 + (Z - 1) / omega_diff_g_infinity(nu) * tail
    return CorrectionFactors(StatisticKind.OMEGA_DIFFERENCE, F, H)


_BUILDERS = {
    StatisticKind.OMEGA_QUOTIENT: _omega_quotient,
    StatisticKind.BIG_OMEGA_QUOTIENT: _big_omega,
    StatisticKind.OMEGA_DIFFERENCE: _omega_diff,
}


def correction_factors(base, stat) -> CorrectionFactors:
    if not isinstance(base, BaseDecomposition):
        base = decompose(base)
    return _BUILDERS[StatisticKind.parse(stat)](base)


def classical_artin_factor(base) -> RationalFunction:
    """The constant F_a * H_a in the primitive-root density (0 for squares)."""
    if not isinstance(base, BaseDecomposition):
        base = decompose(base)
    h = base.h
    hh = h // 2 if (base.sign < 0 and h % 2 == 0) else h
    H = Fraction(1)
    for q in factorint(hh):
        H *= Fraction(q * q - 2 * q, q * q - q - 1)
    d = discriminant(base.a)
    F = Fraction(1)
    if d % 4 == 1:
        prod = Fraction(1)
        for q in factorint(abs(d)):
            prod *= Fraction(-1, q * q - q - 1) if h % q else Fraction(-1, q - 2)
        F = 1 - prod
    return RationalFunction.const(F * H)
