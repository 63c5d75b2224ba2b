"""Numerical coefficients of the density generating functions.

The universal product prod_q f(q, z) = D(0) * exp(sum_n S~(n) z^n / n), so
its Maclaurin coefficients obey n D(n) = sum_{k<n} D(k) S~(n-k).  Prime sums
and Euler products are accumulated in numpy ``longdouble`` (80-bit extended
on x86-64) with numpy's pairwise summation, and every truncated sum carries
an explicit bound on the omitted primes.

Tail bounds.  For s > 1 and X >= 7 we use

    sum_{q > X} q^-s  <=  min( X^(1-s) / (s-1),  C s X^(1-s) / ((s-1) log X) )

with C = 1.25506 from pi(t) < C t / log t (Rosser-Schoenfeld), by partial
summation.  Each statistic's terms are majorised by constant multiples of
q^-s for q > X; below X = 7 the few primes are summed explicitly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Optional

import numpy as np

from .arith import BaseDecomposition, as_fraction, decompose, primes_array
from .errors import DomainError, ResourceError
from .genfun.factors import big_omega_H, big_omega_I, correction_factors
from .kummer import degree
from .statistic import StatisticKind

LD = np.longdouble
ROSSER_SCHOENFELD = 1.25506
# below this the majorant constants are not valid, so primes are summed explicitly
_EXPLICIT_BELOW = 7
PARTITION_CAP = 12

# the 10^6-th and 10^5-th primes
FIRST_MILLION_PRIMES = 15_485_863
FIRST_100K_PRIMES = 1_299_709


@dataclass(frozen=True)
class PrimeCutoff:
    """Prime bounds: ``low`` feeds D(0), S~(1) and the expectation sums,
    ``high`` feeds S~(n) for n >= 2."""

    low: int = FIRST_MILLION_PRIMES
    high: int = FIRST_100K_PRIMES

    @classmethod
    def uniform(cls, x: int) -> "PrimeCutoff":
        return cls(int(x), int(x))

    @classmethod
    def coerce(cls, c) -> "PrimeCutoff":
        if c is None:
            return cls()
        if isinstance(c, PrimeCutoff):
            return c
        if isinstance(c, (tuple, list)):
            return cls(int(c[0]), int(c[1]))
        return cls.uniform(c)

    def for_order(self, n: int) -> int:
        return self.low if n <= 1 else self.high


DEFAULT_CUTOFF = PrimeCutoff()


def prime_power_tail(s: float, X: float) -> float:
    """Upper bound for the sum of q^-s over primes q > X (s > 1, X >= 2)."""
    if s <= 1:
        raise DomainError("tail bound needs s > 1")
    b = X ** (1 - s) / (s - 1)
    if X > 1:
        b = min(b, ROSSER_SCHOENFELD * s * X ** (1 - s) / ((s - 1) * math.log(X)))
    return b


def _primes_ld(cutoff: int) -> np.ndarray:
    return primes_array(cutoff).astype(LD)


def _explicit_primes(cutoff: int) -> list[int]:
    return [q for q in (2, 3, 5, 7) if cutoff < q <= _EXPLICIT_BELOW]


# ---------------------------------------------------------------------------
# prime sums S~(n)


def _sum_terms(stat: StatisticKind, n: int, q):
    if stat is StatisticKind.OMEGA_QUOTIENT:
        return -((1 + q - q * q) ** -n)
    if stat is StatisticKind.OMEGA_DIFFERENCE:
        return -((2 - q * q) ** -n)
    return q ** (-2 * n) - (q + q * q - q**3) ** -n


def _sum_majorant(stat: StatisticKind, n: int, X: float) -> float:
    if stat is StatisticKind.OMEGA_QUOTIENT:
        return (1 - 2 / X) ** -n * prime_power_tail(2 * n, X)
    if stat is StatisticKind.OMEGA_DIFFERENCE:
        return (1 - 2 / X**2) ** -n * prime_power_tail(2 * n, X)
    return prime_power_tail(2 * n, X) + (1 - 2 / X) ** -n * prime_power_tail(3 * n, X)


def _rounding(values: np.ndarray, total) -> float:
    if len(values) == 0:
        return 0.0
    return float(len(values) * np.finfo(LD).eps * np.abs(values).max() + np.finfo(LD).eps * abs(total))


@dataclass(frozen=True)
class TailSum:
    statistic: StatisticKind
    n: int
    cutoff: int
    value: LD
    tail_bound: float

    def __float__(self):
        return float(self.value)


@lru_cache(maxsize=256)
def _tail_sum_cached(stat: StatisticKind, n: int, cutoff: int) -> TailSum:
    q = _primes_ld(cutoff)
    terms = _sum_terms(stat, n, q)
    value = terms.sum(dtype=LD) if len(terms) else LD(0)
    extra = sum(abs(_sum_terms(stat, n, Fraction(p))) for p in _explicit_primes(cutoff))
    X = max(cutoff, _EXPLICIT_BELOW)
    bound = float(extra) + _sum_majorant(stat, n, X) + _rounding(terms, value)
    return TailSum(stat, n, cutoff, value, bound)


def tail_sum(stat, n: int, cutoff: int) -> TailSum:
    """S~(n) truncated to primes <= cutoff, with a bound on the remainder."""
    if n < 1:
        raise DomainError(f"prime sums are defined for n >= 1, got {n}")
    return _tail_sum_cached(StatisticKind.parse(stat), int(n), max(int(cutoff), 1))


# ---------------------------------------------------------------------------
# Euler products


def _log_product(t: np.ndarray, plus: bool):
    """sum log(1 -/+ t) in extended precision."""
    return (np.log1p(t) if plus else np.log1p(-t)).sum(dtype=LD) if len(t) else LD(0)


@dataclass(frozen=True)
class EulerProduct:
    value: LD
    error: float


@lru_cache(maxsize=32)
def artin_type_product(stat: StatisticKind, cutoff: int) -> EulerProduct:
    """D(0): prod (1 - 1/q(q-1)) for the quotient statistics, prod (1 - 1/(q^2-1))
    for the difference statistic, truncated at ``cutoff``."""
    q = _primes_ld(cutoff)
    X = max(cutoff, _EXPLICIT_BELOW)
    if stat is StatisticKind.OMEGA_DIFFERENCE:
        t_of = lambda p: 1 / (p * p - 1)  # noqa: E731
        # t <= q^-2 / (1 - 1/X^2), and |log(1-t)| <= t / (1-t)
        c = 1 / ((1 - 1 / X**2) * (1 - 1 / (X * X - 1)))
    else:
        t_of = lambda p: 1 / (p * (p - 1))  # noqa: E731
        c = 1 / ((1 - 1 / X) * (1 - 1 / (X * (X - 1))))
    logs = _log_product(t_of(q), plus=False)
    value = np.exp(logs)
    delta = sum(-math.log1p(-float(t_of(Fraction(p)))) for p in _explicit_primes(cutoff))
    delta += c * prime_power_tail(2, X) + _rounding(np.atleast_1d(logs), logs)
    # the true product lies in [value * exp(-delta), value]
    return EulerProduct(value, float(value) * -math.expm1(-delta) + 1e-18)


# ---------------------------------------------------------------------------
# coefficient tables


@dataclass
class CoefficientTable:
    """Densities D(n) (or D_a(n)) for n = 0..N with error estimates.

    Predicted tables carry deterministic error bounds; empirical tables carry
    the sample size (``primes_used``) instead.
    """

    a: Optional[Fraction]
    statistic: StatisticKind
    values: list[float]
    errors: list[float]
    cutoff: Optional[PrimeCutoff] = None
    expectation: Optional[tuple[float, float]] = None
    source: str = "predicted"
    primes_used: Optional[int] = None
    x: Optional[int] = None
    xi: Optional[int] = None
    meta: dict = field(default_factory=dict)

    @property
    def coefficients(self) -> list[tuple[float, float]]:
        return list(zip(self.values, self.errors))

    @property
    def max_n(self) -> int:
        return len(self.values) - 1

    def __len__(self):
        return len(self.values)

    def __getitem__(self, n):
        return self.values[n]

    def to_dict(self) -> dict:
        return {
            "a": None if self.a is None else str(self.a),
            "statistic": self.statistic.value,
            "values": [float(v) for v in self.values],
            "errors": [float(e) for e in self.errors],
            "cutoff": None if self.cutoff is None else [self.cutoff.low, self.cutoff.high],
            "expectation": None if self.expectation is None else list(map(float, self.expectation)),
            "source": self.source,
            "primes_used": self.primes_used,
            "x": self.x,
            "xi": self.xi,
            "meta": dict(self.meta),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "CoefficientTable":
        return cls(
            a=None if d.get("a") is None else as_fraction(d["a"]),
            statistic=StatisticKind.parse(d["statistic"]),
            values=[float(v) for v in d["values"]],
            errors=[float(e) for e in d["errors"]],
            cutoff=None if d.get("cutoff") is None else PrimeCutoff(*d["cutoff"]),
            expectation=None if d.get("expectation") is None else tuple(d["expectation"]),
            source=d.get("source", "predicted"),
            primes_used=d.get("primes_used"),
            x=d.get("x"),
            xi=d.get("xi"),
            meta=dict(d.get("meta") or {}),
        )


def _prime_sums(stat, N, cutoff: PrimeCutoff) -> list[TailSum]:
    return [tail_sum(stat, n, cutoff.for_order(n)) for n in range(1, N + 1)]


def _propagated_errors(D, d0: EulerProduct, S: list[TailSum]) -> list[float]:
    """Error bounds for the coefficients of P = D(0) exp(sum S~(k) z^k / k).

    A perturbation dS(k) of the prime sums multiplies P by exp(E(z)) with
    E = sum dS(k) z^k / k, so to first order D(n) moves by
    sum_k dS(k)/k * D(n-k); the second-order remainder is bounded by
    eta^2 e^eta sum_j |D(j)| with eta = sum_k |dS(k)|/k.  The D(0) error
    enters relatively.
    """
    absD = [abs(float(v)) for v in D]
    rel0 = d0.error / float(d0.value)
    dS = [s.tail_bound / (k + 1) for k, s in enumerate(S)]
    eta = sum(dS)
    second = eta * eta * math.exp(eta) * sum(absD)
    eps = float(np.finfo(LD).eps)
    out = []
    for n in range(len(D)):
        first = sum(dS[k - 1] * absD[n - k] for k in range(1, n + 1))
        out.append(rel0 * absD[n] + first + second + 8 * eps * (n + 1) * max(absD))
    return out


def _uncorrected_ld(stat: StatisticKind, N: int, cutoff: PrimeCutoff):
    """D(0..N) as longdouble plus propagated error bounds."""
    d0 = artin_type_product(stat, cutoff.low)
    S = _prime_sums(stat, N, cutoff)
    D = [d0.value]
    for n in range(1, N + 1):
        acc = LD(0)
        for k in range(n):
            acc += D[k] * S[n - k - 1].value
        D.append(acc / n)
    return D, d0, S


def uncorrected_coefficients(stat, N: int, cutoff=None) -> CoefficientTable:
    if N < 0:
        raise DomainError("N must be >= 0")
    stat, cutoff = StatisticKind.parse(stat), PrimeCutoff.coerce(cutoff)
    D, d0, S = _uncorrected_ld(stat, N, cutoff)
    return CoefficientTable(None, stat, [float(v) for v in D], _propagated_errors(D, d0, S), cutoff)


def _partitions(n: int):
    """Multiplicity vectors (m_1..m_n) with sum k m_k = n, generated iteratively."""
    # standard ascending-composition walk, then counted
    if n == 0:
        yield {}
        return
    a = [0] * (n + 1)
    k, a[1] = 1, n
    while k != 0:
        x, y = a[k - 1] + 1, a[k] - 1
        k -= 1
        while x <= y:
            a[k] = x
            y -= x
            k += 1
        a[k] = x + y
        parts = a[: k + 1]
        mult: dict[int, int] = {}
        for p in parts:
            mult[p] = mult.get(p, 0) + 1
        yield mult


def bell_coefficients(stat, N: int, cutoff=None, partition_cap: int = PARTITION_CAP) -> CoefficientTable:
    """Same contract as :func:`uncorrected_coefficients`, via the explicit
    partition sum  D(n) = D(0) sum prod_k (S~(k)/k)^(m_k) / m_k!."""
    if N > partition_cap:
        raise ResourceError(f"partition enumeration capped at N={partition_cap}, asked for {N}")
    stat, cutoff = StatisticKind.parse(stat), PrimeCutoff.coerce(cutoff)
    d0 = artin_type_product(stat, cutoff.low)
    S = _prime_sums(stat, N, cutoff)
    D = [d0.value]
    for n in range(1, N + 1):
        acc = LD(0)
        for mult in _partitions(n):
            w = Fraction(1)
            for k, m in mult.items():
                w /= k**m * math.factorial(m)
            term = LD(w.numerator) / LD(w.denominator)
            for k, m in mult.items():
                term *= S[k - 1].value ** m
            acc += term
        D.append(d0.value * acc)
    values, errors = [float(v) for v in D], _propagated_errors(D, d0, S)
    return CoefficientTable(None, stat, values, errors, cutoff, meta={"method": "bell"})


def _base(a) -> BaseDecomposition:
    return a if isinstance(a, BaseDecomposition) else decompose(a)


def corrected_coefficients(a, stat, N: int, cutoff=None, with_expectation: bool = False) -> CoefficientTable:
    """D_a(n) = sum_k c_k D(n-k) with c_k the exact Taylor coefficients of F*H."""
    base = _base(a)
    stat, cutoff = StatisticKind.parse(stat), PrimeCutoff.coerce(cutoff)
    c = correction_factors(base, stat).combined.taylor(N)
    D, d0, S = _uncorrected_ld(stat, N, cutoff)
    Da = []
    for n in range(N + 1):
        acc = LD(0)
        for k in range(n + 1):
            if c[k]:
                acc += LD(c[k].numerator) / LD(c[k].denominator) * D[n - k]
        Da.append(acc)
    # C(z) P(z) responds to perturbed prime sums exactly as P does
    errors = _propagated_errors(Da, d0, S)
    values = [float(v) for v in Da]
    table = CoefficientTable(base.a, stat, values, errors, cutoff)
    if with_expectation:
        table.expectation = expectation(base, stat, cutoff)
    return table


def predict(a, stat, N: int, cutoff=None) -> CoefficientTable:
    """Corrected table for a base, or the uncorrected one when ``a`` is None;
    always with the expectation attached."""
    stat, cutoff = StatisticKind.parse(stat), PrimeCutoff.coerce(cutoff)
    if a is None:
        t = uncorrected_coefficients(stat, N, cutoff)
        t.expectation = uncorrected_expectation(stat, cutoff)
        return t
    return corrected_coefficients(a, stat, N, cutoff, with_expectation=True)


# ---------------------------------------------------------------------------
# expectations and the decay constant


def _expectation_sum(stat: StatisticKind, cutoff: int) -> tuple[float, float]:
    q = _primes_ld(cutoff)
    X = max(cutoff, _EXPLICIT_BELOW)
    if stat is StatisticKind.OMEGA_QUOTIENT:
        f = lambda p: 1 / (p * (p - 1))  # noqa: E731
        c = 1 / (1 - 1 / X)
    elif stat is StatisticKind.OMEGA_DIFFERENCE:
        f = lambda p: 1 / (p * p - 1)  # noqa: E731
        c = 1 / (1 - 1 / X**2)
    else:
        f = lambda p: p / ((p - 1) * (p - 1) * (p + 1))  # noqa: E731
        c = 1 / (1 - 1 / X) ** 2
    terms = f(q)
    value = terms.sum(dtype=LD) if len(terms) else LD(0)
    bound = float(sum(f(Fraction(p)) for p in _explicit_primes(cutoff)))
    bound += c * prime_power_tail(2, X) + _rounding(terms, value)
    return float(value), bound


def uncorrected_expectation(stat, cutoff=None) -> tuple[float, float]:
    stat, cutoff = StatisticKind.parse(stat), PrimeCutoff.coerce(cutoff)
    return _expectation_sum(stat, cutoff.low)


def expectation(a, stat, cutoff=None) -> tuple[float, float]:
    """E_a = F'(1) + H'(1) + prime sum, with a bound on the truncated tail."""
    base = _base(a)
    stat, cutoff = StatisticKind.parse(stat), PrimeCutoff.coerce(cutoff)
    cf = correction_factors(base, stat)
    exact = cf.F.derivative_at(1) + cf.H.derivative_at(1)
    s, bound = _expectation_sum(stat, cutoff.low)
    return float(exact) + s, bound


def decay_product(cutoff: int) -> EulerProduct:
    """prod_{3 <= q <= cutoff} (1 + 3q / ((q-1)(q^2-4)))."""
    q = _primes_ld(cutoff)
    q = q[q >= 3]
    X = max(cutoff, _EXPLICIT_BELOW)
    f = lambda p: 3 * p / ((p - 1) * (p * p - 4))  # noqa: E731
    logs = _log_product(f(q), plus=True)
    value = np.exp(logs)
    delta = sum(math.log1p(float(f(Fraction(p)))) for p in _explicit_primes(max(cutoff, 2)))
    delta += 3 * prime_power_tail(2, X) / ((1 - 1 / X) * (1 - 4 / X**2))
    return EulerProduct(value, float(value) * math.expm1(delta))


def decay_constant(a, cutoff=None) -> float:
    """R_a with D_a^Omega(n) = R_a 4^-n + O(9^-n)."""
    base = _base(a)
    cutoff = PrimeCutoff.coerce(cutoff)
    H4 = big_omega_H(base.h).evaluate(4)
    I4 = big_omega_I(base.h, base.gamma).evaluate(4)
    return float(Fraction(3, 2) * H4 * (1 + I4)) * float(decay_product(cutoff.low).value)


# ---------------------------------------------------------------------------


def _mobius_table(L: int) -> np.ndarray:
    mu = np.ones(L + 1, dtype=np.int8)
    mu[0] = 0
    flags = np.ones(L + 1, dtype=bool)
    for p in range(2, L + 1):
        if flags[p]:
            flags[p * p :: p] = False
            mu[p::p] *= -1
            mu[p * p :: p * p] = 0
    return mu


def artin_inclusion_exclusion(a, L: int, x_unused=None) -> float:
    """Partial sum over l <= L of mu(l) / [Q(a^(1/l), zeta_l) : Q]."""
    if L < 1:
        raise DomainError("L must be >= 1")
    base = _base(a)
    mu = _mobius_table(L)
    terms = [int(mu[l]) / degree(base, l, 1) for l in range(1, L + 1) if mu[l]]
    return math.fsum(terms)


__all__ = [
    "CoefficientTable",
    "DEFAULT_CUTOFF",
    "EulerProduct",
    "PrimeCutoff",
    "TailSum",
    "artin_inclusion_exclusion",
    "artin_type_product",
    "bell_coefficients",
    "corrected_coefficients",
    "decay_constant",
    "expectation",
    "predict",
    "prime_power_tail",
    "tail_sum",
    "uncorrected_coefficients",
    "uncorrected_expectation",
]
