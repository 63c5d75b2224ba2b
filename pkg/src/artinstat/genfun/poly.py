"""Exact univariate polynomials and rational functions over Q.

Polynomials are immutable tuples of :class:`Fraction` coefficients in
increasing degree, trimmed so the last entry is nonzero; ``()`` is zero.
A :class:`RationalFunction` is always stored in canonical form: numerator and
denominator coprime, denominator monic.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import reduce
from typing import Iterable, Sequence

from ..errors import PoleAtOrigin, PoleAtPoint


def _trim(c: Iterable) -> tuple:
    c = [Fraction(x) for x in c]
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


class Poly:
    __slots__ = ("c",)

    def __init__(self, coeffs: Iterable = ()):
        if isinstance(coeffs, (int, Fraction)):
            coeffs = (coeffs,)
        self.c = _trim(coeffs)

    @classmethod
    def z(cls) -> "Poly":
        return cls((0, 1))

    @classmethod
    def monomial(cls, k: int, coeff=1) -> "Poly":
        return cls((0,) * k + (coeff,))

    @property
    def degree(self) -> int:
        return len(self.c) - 1

    def is_zero(self) -> bool:
        return not self.c

    def lead(self) -> Fraction:
        return self.c[-1] if self.c else Fraction(0)

    def __getitem__(self, k: int) -> Fraction:
        return self.c[k] if 0 <= k < len(self.c) else Fraction(0)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly(other)
        return isinstance(other, Poly) and self.c == other.c

    def __hash__(self):
        return hash(self.c)

    def __add__(self, other):
        other = _as_poly(other)
        n = max(len(self.c), len(other.c))
        return Poly(self[k] + other[k] for k in range(n))

    __radd__ = __add__

    def __neg__(self):
        return Poly(-x for x in self.c)

    def __sub__(self, other):
        return self + (-_as_poly(other))

    def __rsub__(self, other):
        return _as_poly(other) - self

    def __mul__(self, other):
        other = _as_poly(other)
        if not self.c or not other.c:
            return Poly()
        out = [Fraction(0)] * (len(self.c) + len(other.c) - 1)
        for i, x in enumerate(self.c):
            if x:
                for j, y in enumerate(other.c):
                    out[i + j] += x * y
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = Poly(1)
        for _ in range(k):
            out = out * self
        return out

    def __divmod__(self, other):
        other = _as_poly(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.c)
        dq = other.degree
        lead = other.lead()
        quot = [Fraction(0)] * max(len(rem) - dq, 0)
        for k in range(len(rem) - 1 - dq, -1, -1):
            f = rem[k + dq] / lead
            quot[k] = f
            if f:
                for j, y in enumerate(other.c):
                    rem[k + j] -= f * y
        return Poly(quot), Poly(rem[:dq] if dq > 0 else ())

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        lead = self.lead()
        return Poly(x / lead for x in self.c)

    def __call__(self, x):
        acc = Fraction(0) if isinstance(x, (int, Fraction)) else 0 * x
        for coeff in reversed(self.c):
            acc = acc * x + coeff
        return acc

    def derivative(self) -> "Poly":
        return Poly(k * x for k, x in enumerate(self.c) if k)

    def content_cleared(self) -> tuple[list[int], Fraction]:
        """Primitive integer coefficients and the scale: ``self == scale * ints``."""
        if self.is_zero():
            return [], Fraction(0)
        den = reduce(math.lcm, (x.denominator for x in self.c), 1)
        ints = [int(x * den) for x in self.c]
        g = reduce(math.gcd, ints, 0)
        if ints[-1] < 0:
            g = -g
        return [x // g for x in ints], Fraction(g, den)

    def to_str(self, var: str = "z") -> str:
        return _format_terms(list(self.c), var)

    def __repr__(self):
        return f"Poly({self.to_str()})"


def _as_poly(x) -> Poly:
    return x if isinstance(x, Poly) else Poly(x)


def _format_terms(coeffs: Sequence, var: str) -> str:
    terms = []
    for k in range(len(coeffs) - 1, -1, -1):
        c = coeffs[k]
        if c == 0:
            continue
        mag = abs(c)
        if k == 0:
            body = str(mag)
        else:
            mono = var if k == 1 else f"{var}^{k}"
            body = mono if mag == 1 else f"{mag}*{mono}"
        terms.append(("-" if c < 0 else "+", body))
    if not terms:
        return "0"
    head_sign, head = terms[0]
    out = ("-" if head_sign == "-" else "") + head
    for sign, body in terms[1:]:
        out += f" {sign} {body}"
    return out


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd by the Euclidean algorithm over Q."""
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


class RationalFunction:
    __slots__ = ("num", "den")

    def __init__(self, num, den=1):
        num, den = _as_poly(num), _as_poly(den)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero():
            self.num, self.den = Poly(), Poly(1)
            return
        g = poly_gcd(num, den)
        if g.degree > 0:
            num, den = num // g, den // g
        lead = den.lead()
        self.num = Poly(x / lead for x in num.c)
        self.den = den.monic()

    @classmethod
    def z(cls) -> "RationalFunction":
        return cls(Poly.z())

    @classmethod
    def const(cls, c) -> "RationalFunction":
        return cls(Poly(Fraction(c)))

    def canonical(self) -> "RationalFunction":
        return RationalFunction(self.num, self.den)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, Poly)):
            other = RationalFunction(other)
        return isinstance(other, RationalFunction) and self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __add__(self, other):
        other = _as_rf(other)
        return RationalFunction(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other):
        return self + (-_as_rf(other))

    def __rsub__(self, other):
        return _as_rf(other) - self

    def __mul__(self, other):
        other = _as_rf(other)
        return RationalFunction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _as_rf(other)
        if other.num.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RationalFunction(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return _as_rf(other) / self

    def __pow__(self, k: int):
        if k < 0:
            return RationalFunction(1) / self ** (-k)
        return RationalFunction(self.num**k, self.den**k)

    def is_constant(self) -> bool:
        return self.num.degree <= 0 and self.den.degree == 0

    def evaluate(self, z0) -> Fraction:
        z0 = Fraction(z0)
        d = self.den(z0)
        if d == 0:
            raise PoleAtPoint(f"denominator vanishes at z = {z0}")
        return self.num(z0) / d

    __call__ = evaluate

    def derivative(self) -> "RationalFunction":
        n, d = self.num, self.den
        return RationalFunction(n.derivative() * d - n * d.derivative(), d * d)

    def derivative_at(self, z0) -> Fraction:
        z0 = Fraction(z0)
        d0 = self.den(z0)
        if d0 == 0:
            raise PoleAtPoint(f"denominator vanishes at z = {z0}")
        return (self.num.derivative()(z0) * d0 - self.num(z0) * self.den.derivative()(z0)) / (d0 * d0)

    def taylor(self, N: int) -> list[Fraction]:
        """Maclaurin coefficients c_0..c_N by power-series long division."""
        d0 = self.den[0]
        if d0 == 0:
            raise PoleAtOrigin("denominator vanishes at z = 0")
        out: list[Fraction] = []
        for n in range(N + 1):
            acc = self.num[n]
            for k in range(1, min(n, self.den.degree) + 1):
                acc -= self.den[k] * out[n - k]
            out.append(acc / d0)
        return out

    def integer_form(self) -> tuple[list[int], list[int]]:
        """Coprime integer coefficient lists (num, den), den leading coefficient > 0.

        The shared rational scale is absorbed into the numerator; the
        denominator is made primitive.
        """
        dints, dscale = self.den.content_cleared()
        nscaled = self.num * (1 / dscale)
        ncoeffs = list(nscaled.c)
        den_l = reduce(math.lcm, (x.denominator for x in ncoeffs), 1)
        return [int(x * den_l) for x in ncoeffs] or [0], [x * den_l for x in dints]

    def to_str(self, var: str = "z") -> str:
        n, d = self.integer_form()
        ns, ds = _format_terms(n, var), _format_terms(d, var)
        if ds == "1":
            return ns
        if " " not in ns:
            ns = ns if ns.lstrip("-").isdigit() else f"({ns})"
        else:
            ns = f"({ns})"
        return f"{ns}/{ds}" if len(d) == 1 else f"{ns}/({ds})"

    def __repr__(self):
        return f"RationalFunction({self.to_str()})"


def _as_rf(x) -> RationalFunction:
    return x if isinstance(x, RationalFunction) else RationalFunction(x)


Z = RationalFunction.z()
