"""Segmented computation of the index (p-1)/ord_p(a) for every prime p <= x.

For a prime q | p-1 the q-part of the index is the largest q^j (j <= nu_q(p-1))
with a^((p-1)/q^j) = 1 mod p, so each q is handled independently and in bulk:
the primes p = 1 mod q in a segment are picked out by striding through the
segment's primality flags, and the modular powers are done on numpy arrays.
After all q <= sqrt(x) are removed, what is left of p-1 is 1 or a single prime.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from ..arith import as_fraction, primes_array
from ..errors import DomainError, ResourceError

DEFAULT_SEGMENT = 1 << 24
MAX_X = (1 << 63) - 1
# p * p must fit in int64 for the fast path
_INT64_SAFE = 1 << 31


def _dtype_for(hi: int):
    return np.int64 if hi <= _INT64_SAFE else object


def powmod(base: np.ndarray, exp: np.ndarray, mod: np.ndarray) -> np.ndarray:
    """Elementwise base**exp % mod by square-and-multiply."""
    result = np.ones_like(mod)
    b = base % mod
    e = exp.copy()
    while True:
        odd = (e & 1).astype(bool)
        if odd.any():
            result[odd] = result[odd] * b[odd] % mod[odd]
        e >>= 1
        live = e > 0
        if not live.any():
            break
        b[live] = b[live] * b[live] % mod[live]
    return result % mod


def _big_mod(n: int, p: np.ndarray) -> np.ndarray:
    """n mod p for a Python int n of any size."""
    n = abs(n)
    if n < (1 << 62) or p.dtype == object:
        return np.asarray(n % p, dtype=p.dtype) if p.dtype != object else np.array([n % int(v) for v in p], dtype=object)
    digits = []
    while n:
        digits.append(n & 0xFFFFF)
        n >>= 20
    r = np.zeros_like(p)
    for d in reversed(digits):
        r = ((r << 20) + d) % p
    return r


def segment_primes(lo: int, hi: int, base_primes: np.ndarray) -> np.ndarray:
    """Primality flags for the integers in [lo, hi)."""
    flags = np.ones(hi - lo, dtype=bool)
    for n in range(lo, min(hi, 2)):
        flags[n - lo] = False
    for q in base_primes.tolist():
        if q * q >= hi:
            break
        start = max(q * q, ((lo + q - 1) // q) * q)
        flags[start - lo :: q] = False
    return flags


@dataclass
class SegmentResult:
    lo: int
    hi: int
    p: np.ndarray
    index: np.ndarray
    omega: np.ndarray
    big_omega: np.ndarray
    omega_diff: np.ndarray
    omega_xi: dict = field(default_factory=dict)
    # flattened factorisation of p-1: (position, prime, exponent)
    factors: Optional[tuple] = None


def process_segment(
    a,
    lo: int,
    hi: int,
    small_primes: np.ndarray,
    xis: Sequence[int] = (),
    keep_factors: bool = False,
) -> SegmentResult:
    """Index statistics for primes p in [lo, hi) with nu_p(a) = 0.

    ``small_primes`` must contain every prime <= sqrt(hi - 1).
    """
    a = as_fraction(a)
    dt = _dtype_for(hi)
    flags = segment_primes(lo, hi, small_primes)
    offsets = np.flatnonzero(flags)
    p = (offsets + lo).astype(np.int64).astype(dt)

    # drop primes dividing numerator or denominator
    num_r = _big_mod(a.numerator, p)
    den_r = _big_mod(a.denominator, p)
    keep = (num_r != 0) & (den_r != 0)
    if not keep.all():
        flags[offsets[~keep]] = False
        p, num_r, den_r, offsets = p[keep], num_r[keep], den_r[keep], offsets[keep]
    if a.numerator < 0:
        num_r = (p - num_r) % p
    residue = num_r * powmod(den_r, p - 2, p) % p if a.denominator != 1 else num_r % p

    n = len(p)
    pos_of = np.cumsum(flags, dtype=np.int64) - 1
    pm1 = p - 1
    rem = pm1.copy()
    index = np.ones(n, dtype=dt)
    omega = np.zeros(n, dtype=np.int16)
    big_omega = np.zeros(n, dtype=np.int16)
    omega_diff = np.zeros(n, dtype=np.int16)
    omega_xi = {xi: np.zeros(n, dtype=np.int16) for xi in xis}
    fpos, fq, fe = [], [], []

    def absorb(idx, q, nu, j):
        hit = j > 0
        omega[idx] += hit
        big_omega[idx] += j.astype(np.int16)
        omega_diff[idx] += j == nu
        for xi, arr in omega_xi.items():
            arr[idx] += hit & (q <= xi)
        if keep_factors:
            fpos.append(idx)
            fq.append(np.broadcast_to(np.asarray(q, dtype=object if dt is object else np.int64), idx.shape).copy())
            fe.append(nu.astype(np.int64))

    qmax = math.isqrt(max(hi - 2, 1))
    for q in small_primes.tolist():
        if q > qmax:
            break
        start = (1 - lo) % q
        cand = np.arange(start, hi - lo, q)
        cand = cand[flags[cand]]
        if len(cand) == 0:
            continue
        idx = pos_of[cand]
        # nu_q(p-1)
        nu = np.zeros(len(idx), dtype=np.int64)
        v = rem[idx]
        qq = q if dt is not object else int(q)
        while True:
            div = v % qq == 0
            if not div.any():
                break
            nu += div
            v = np.where(div, v // qq, v)
        rem[idx] = v
        # largest j <= nu with a^((p-1)/q^j) = 1
        j = np.zeros(len(idx), dtype=np.int64)
        e = pm1[idx]
        live = np.ones(len(idx), dtype=bool)
        for step in range(1, int(nu.max()) + 1):
            live &= nu >= step
            if not live.any():
                break
            e = np.where(live, e // qq, e)
            sel = np.flatnonzero(live)
            ok = powmod(residue[idx[sel]], e[sel], p[idx[sel]]) == 1
            j[sel[ok]] = step
            live[sel[~ok]] = False
        if dt is object:
            index[idx] = index[idx] * np.array([qq**int(t) for t in j], dtype=object)
        else:
            index[idx] *= qq**j
        absorb(idx, q, nu, j)

    # remaining cofactor is 1 or one prime > sqrt(x)
    big = np.flatnonzero(rem > 1)
    if len(big):
        r = rem[big]
        ok = powmod(residue[big], pm1[big] // r, p[big]) == 1
        index[big[ok]] = index[big[ok]] * r[ok]
        omega[big] += ok
        big_omega[big] += ok
        omega_diff[big] += ok
        for xi, arr in omega_xi.items():
            arr[big] += ok & (r <= xi).astype(bool)
        if keep_factors:
            fpos.append(big)
            fq.append(r)
            fe.append(np.ones(len(big), dtype=np.int64))

    factors = None
    if keep_factors:
        if fpos:
            factors = (np.concatenate(fpos), np.concatenate(fq), np.concatenate(fe))
        else:
            factors = (np.zeros(0, np.int64), np.zeros(0, np.int64), np.zeros(0, np.int64))
    return SegmentResult(lo, hi, p, index, omega, big_omega, omega_diff, omega_xi, factors)


def segment_bounds(x: int, segment_size: int = DEFAULT_SEGMENT) -> list[tuple[int, int]]:
    if x < 2:
        raise DomainError("x must be >= 2")
    if x > MAX_X:
        raise ResourceError(f"x = {x} exceeds the supported bound 2^63 - 1")
    if segment_size < 1024:
        raise DomainError("segment size must be at least 1024")
    return [(lo, min(lo + segment_size, x + 1)) for lo in range(0, x + 1, segment_size)]


def base_primes_for(x: int) -> np.ndarray:
    return primes_array(math.isqrt(x) + 1)
