"""Elementary integer and rational arithmetic.

Everything here is exact: rationals are :class:`fractions.Fraction` in lowest
terms and no floating point is used.  The only numpy code is the prime sieve.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache, reduce
from typing import Iterable, Sequence, Union

import numpy as np

from .errors import DomainError, ResourceError

Rational = Union[int, Fraction]

# Largest prime table we are willing to materialise, in bytes.  The sieve uses
# one byte per integer and the prime list eight bytes per prime.
PRIME_TABLE_BYTE_CAP = 1 << 32

TRIAL_DIVISION_BOUND = 10**6


def as_fraction(a) -> Fraction:
    """Coerce ints, Fractions and strings like ``"-9/4"`` to a Fraction."""
    if isinstance(a, Fraction):
        return a
    if isinstance(a, int):
        return Fraction(a)
    if isinstance(a, str):
        try:
            return Fraction(a.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise DomainError(f"cannot parse rational {a!r}") from exc
    raise TypeError(f"expected int, Fraction or str, got {type(a).__name__}")


# ---------------------------------------------------------------------------
# primality and factorisation


_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def is_prime(n: int) -> bool:
    """Miller-Rabin; deterministic for n < 3.3e24 (first 13 prime bases)."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for b in _MR_BASES:
        x = pow(b, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@lru_cache(maxsize=1)
def _trial_primes() -> tuple:
    return tuple(int(p) for p in _sieve(TRIAL_DIVISION_BOUND))


def _pollard_brent(n: int) -> int:
    if n % 2 == 0:
        return 2
    rng = random.Random(n)
    while True:
        y, c, m = rng.randrange(1, n), rng.randrange(1, n), 128
        g = r = q = 1
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g


def factorint(n: int) -> dict[int, int]:
    """Prime factorisation of a positive integer as ``{prime: exponent}``.

    Trial division by primes below 10**6, then Pollard-Brent rho on whatever
    composite cofactor remains.
    """
    if n < 1:
        raise DomainError(f"factorint needs a positive integer, got {n}")
    out: dict[int, int] = {}
    for p in _trial_primes():
        if p * p > n:
            break
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out[p] = e
    if n > 1:
        stack = [n]
        while stack:
            m = stack.pop()
            if m == 1:
                continue
            if is_prime(m):
                out[m] = out.get(m, 0) + 1
                continue
            d = _pollard_brent(m)
            stack.extend((d, m // d))
    return dict(sorted(out.items()))


def prime_divisors(n: int) -> list[int]:
    return list(factorint(abs(n))) if n not in (0, 1, -1) else []


def nu_p(a, p: int) -> int:
    """Signed p-adic valuation of a nonzero rational."""
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")
    a = as_fraction(a)
    if a == 0:
        raise DomainError("valuation of zero is undefined")
    return _int_val(a.numerator, p) - _int_val(a.denominator, p)


def _int_val(n: int, p: int) -> int:
    n = abs(n)
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return e


def prime_factor_counts(n: int) -> tuple[int, int]:
    """Return ``(omega(n), Omega(n))``."""
    if n < 1:
        raise DomainError(f"prime_factor_counts needs n >= 1, got {n}")
    f = factorint(n)
    return len(f), sum(f.values())


def euler_phi(n: int) -> int:
    r = n
    for p in factorint(n):
        r -= r // p
    return r


def mobius(n: int) -> int:
    f = factorint(n)
    if any(e > 1 for e in f.values()):
        return 0
    return -1 if len(f) % 2 else 1


def divisors(n: int) -> list[int]:
    divs = [1]
    for p, e in factorint(n).items():
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return sorted(divs)


# ---------------------------------------------------------------------------
# multiplicative order


def residue(a, p: int) -> int:
    """The class of a rational ``a`` in (Z/pZ); requires nu_p(a) == 0."""
    a = as_fraction(a)
    num, den = a.numerator % p, a.denominator % p
    if num == 0 or den == 0:
        raise DomainError(f"nu_{p}({a}) != 0")
    return num * pow(den, p - 2, p) % p


def multiplicative_order(a, p: int, factors: dict[int, int] | None = None) -> int:
    """ord_p(a) by descent from p-1 through its prime factors.

    ``factors`` is the factorisation of p-1 if the caller already has it.
    """
    r = residue(a, p)
    if factors is None:
        factors = factorint(p - 1) if p > 2 else {}
    d = p - 1
    for q in factors:
        while d % q == 0 and pow(r, d // q, p) == 1:
            d //= q
    return d


# ---------------------------------------------------------------------------
# prime tables


def _sieve(limit: int) -> np.ndarray:
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    flags[4::2] = False
    for p in range(3, math.isqrt(limit) + 1, 2):
        if flags[p]:
            flags[p * p :: 2 * p] = False
    return np.flatnonzero(flags).astype(np.int64)


@dataclass(frozen=True)
class PrimeTable:
    limit: int
    primes: np.ndarray
    spf: np.ndarray | None = field(default=None, repr=False, compare=False)

    def __len__(self):
        return len(self.primes)

    def __iter__(self):
        return iter(self.primes.tolist())

    def factor(self, n: int) -> dict[int, int]:
        """Factor ``n <= limit`` by walking the smallest-prime-factor table."""
        if self.spf is None:
            raise DomainError("table was built without an spf array")
        if not 1 <= n <= self.limit:
            raise DomainError(f"{n} outside spf range [1, {self.limit}]")
        out: dict[int, int] = {}
        while n > 1:
            p = int(self.spf[n])
            out[p] = out.get(p, 0) + 1
            n //= p
        return out


def _spf_table(limit: int) -> np.ndarray:
    spf = np.zeros(limit + 1, dtype=np.int32 if limit < 2**31 else np.int64)
    spf[1:] = np.arange(1, limit + 1)
    # descending order, so the smallest prime writes last
    for p in _sieve(math.isqrt(limit))[::-1].tolist():
        spf[p * p :: p] = p
    return spf


def primes_up_to(limit: int, with_spf: bool = False) -> PrimeTable:
    """Exact ordered table of the primes ``<= limit``."""
    limit = int(limit)
    if limit < 2:
        raise DomainError(f"primes_up_to needs limit >= 2, got {limit}")
    est = limit + 8 * int(1.26 * limit / math.log(limit)) + (4 * limit if with_spf else 0)
    if est > PRIME_TABLE_BYTE_CAP:
        raise ResourceError(f"prime table up to {limit} needs ~{est} bytes")
    primes = _sieve(limit)
    spf = _spf_table(limit) if with_spf else None
    return PrimeTable(limit, primes, spf)


@lru_cache(maxsize=8)
def _cached_primes(limit: int) -> np.ndarray:
    arr = primes_up_to(limit).primes
    arr.setflags(write=False)
    return arr


def primes_array(limit: int) -> np.ndarray:
    """Read-only cached numpy array of primes ``<= limit`` (empty if limit < 2)."""
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    return _cached_primes(int(limit))


def nth_prime(n: int) -> int:
    """The n-th prime (1-indexed) via a sieve sized by the Rosser bound."""
    if n < 1:
        raise DomainError("nth_prime needs n >= 1")
    if n < 6:
        return (2, 3, 5, 7, 11)[n - 1]
    ln = math.log(n)
    bound = int(n * (ln + math.log(ln))) + 1
    return int(primes_array(bound)[n - 1])


# ---------------------------------------------------------------------------
# squarefree kernels and the base decomposition


def kernel_and_discriminant(g) -> tuple[int, int]:
    """Squarefree kernel s(g) and discriminant of Q(sqrt g).

    s(g) carries the sign of g; the discriminant is s(g) when s(g) = 1 mod 4
    and 4 s(g) otherwise.
    """
    g = as_fraction(g)
    if g == 0:
        raise DomainError("kernel of zero is undefined")
    s = -1 if g < 0 else 1
    for n in (g.numerator, g.denominator):
        for p, e in factorint(abs(n)).items():
            if e % 2:
                s *= p
    return s, (s if s % 4 == 1 else 4 * s)


def discriminant(g) -> int:
    return kernel_and_discriminant(g)[1]


def _integer_root(n: int, k: int) -> int:
    r = round(n ** (1.0 / k)) if n < 2**1000 else int(math.exp(math.log(n) / k))
    for c in (r - 1, r, r + 1):
        if c >= 0 and c**k == n:
            return c
    # fall back to exact Newton iteration for very large inputs
    x = 1 << ((n.bit_length() + k - 1) // k)
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            break
        x = y
    if x**k != n:
        raise ValueError(f"{n} is not a perfect {k}-th power")
    return x


@dataclass(frozen=True)
class BaseDecomposition:
    """Arithmetic fingerprint of a base ``a = sign * a0**h``.

    ``a0 > 0`` is not a perfect power, ``a0 = b0 * c0**2`` with ``b0``
    squarefree, and ``gamma = b0 / gcd(2, b0)``.  The three discriminants
    are those of Q(sqrt a0), Q(sqrt -a0) and Q(sqrt 2 a0).
    """

    a: Fraction
    sign: int
    a0: Fraction
    h: int
    b0: int
    c0: Fraction
    gamma: int
    disc_a0: int
    disc_neg_a0: int
    disc_2a0: int

    @property
    def nu2_h(self) -> int:
        return _int_val(self.h, 2)

    @property
    def positive(self) -> bool:
        return self.sign > 0

    def disc_a(self) -> int:
        return discriminant(self.a)


def decompose(a) -> BaseDecomposition:
    a = as_fraction(a)
    if a in (0, 1, -1):
        raise DomainError(f"base {a} is excluded (must not be -1, 0 or 1)")
    sign = -1 if a < 0 else 1
    num, den = abs(a.numerator), a.denominator
    fn, fd = factorint(num), factorint(den)
    h = reduce(math.gcd, list(fn.values()) + list(fd.values()), 0)
    a0 = Fraction(_integer_root(num, h), _integer_root(den, h))
    b0 = 1
    for n in (a0.numerator, a0.denominator):
        for p, e in factorint(n).items():
            if e % 2:
                b0 *= p
    c0sq = a0 / b0
    c0 = Fraction(_integer_root(c0sq.numerator, 2), _integer_root(c0sq.denominator, 2))
    gamma = b0 // math.gcd(2, b0)
    return BaseDecomposition(
        a=a,
        sign=sign,
        a0=a0,
        h=h,
        b0=b0,
        c0=c0,
        gamma=gamma,
        disc_a0=discriminant(a0),
        disc_neg_a0=discriminant(-a0),
        disc_2a0=discriminant(2 * a0),
    )


def recompose(base: BaseDecomposition) -> Fraction:
    return base.sign * base.a0**base.h
