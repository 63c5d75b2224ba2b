from __future__ import annotations

import json
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterator, Optional, Sequence

import numpy as np

from ..arith import as_fraction
from ..coeffs import CoefficientTable
from ..errors import DomainError, MismatchError
from ..statistic import StatisticKind
from .sieve import DEFAULT_SEGMENT, base_primes_for, process_segment, segment_bounds

SCHEMA_VERSION = 1
DEFAULT_XI_GRID = (10, 100, 1000)


def resolve_threads(threads: Optional[int] = None) -> int:
    if threads is None:
        env = os.environ.get("ARTIN_THREADS")
        threads = int(env) if env else 1
    if threads < 1:
        raise DomainError(f"threads must be >= 1, got {threads}")
    return threads


def _check_x(x: int):
    if x < 3:
        raise DomainError(f"x must be >= 3, got {x}")


@dataclass(frozen=True)
class OrderRecord:
    p: int
    ord: int
    p_minus_1_factors: tuple  # primes of p-1 with multiplicity, ascending

    @property
    def index(self) -> int:
        return (self.p - 1) // self.ord


def stream_orders(a, x: int, segment_size: int = DEFAULT_SEGMENT) -> Iterator[OrderRecord]:
    """Every prime p <= x with nu_p(a) = 0, with ord_p(a) and p-1 factored."""
    _check_x(x)
    a = as_fraction(a)
    bp = base_primes_for(x)
    for lo, hi in segment_bounds(x, segment_size):
        seg = process_segment(a, lo, hi, bp, keep_factors=True)
        pos, qs, es = seg.factors
        order = np.argsort(pos, kind="stable")
        pos, qs, es = pos[order], qs[order], es[order]
        bounds = np.searchsorted(pos, np.arange(len(seg.p) + 1))
        plist, ilist = seg.p.tolist(), seg.index.tolist()
        qlist, elist = qs.tolist(), es.tolist()
        for k, p in enumerate(plist):
            fac = []
            for t in range(bounds[k], bounds[k + 1]):
                fac.extend([int(qlist[t])] * int(elist[t]))
            fac.sort()
            yield OrderRecord(int(p), int(p - 1) // int(ilist[k]), tuple(fac))


@dataclass
class OrderProfile:
    """Per-prime index data for one base up to x, concatenated over segments."""

    a: Fraction
    x: int
    p: np.ndarray
    index: np.ndarray
    omega: np.ndarray
    big_omega: np.ndarray
    omega_diff: np.ndarray
    omega_xi: dict
    runtime_s: float

    @property
    def primes_used(self) -> int:
        return len(self.p)

    def values(self, stat: StatisticKind, xi: Optional[int] = None) -> np.ndarray:
        if xi is not None:
            return self.omega_xi[xi]
        return {
            StatisticKind.OMEGA_QUOTIENT: self.omega,
            StatisticKind.BIG_OMEGA_QUOTIENT: self.big_omega,
            StatisticKind.OMEGA_DIFFERENCE: self.omega_diff,
        }[stat]


_PROFILE_CACHE: dict = {}
_PROFILE_CACHE_SIZE = 8


def order_profile(
    a,
    x: int,
    xis: Sequence[int] = (),
    threads: Optional[int] = None,
    segment_size: int = DEFAULT_SEGMENT,
    use_cache: bool = True,
) -> OrderProfile:
    _check_x(x)
    a = as_fraction(a)
    xis = tuple(sorted(set(int(v) for v in xis)))
    key = (a, x, xis, segment_size)
    if use_cache and key in _PROFILE_CACHE:
        return _PROFILE_CACHE[key]
    if use_cache:
        # a cached profile with a superset of xi values will do
        for (ca, cx, cxis, cseg), prof in _PROFILE_CACHE.items():
            if (ca, cx, cseg) == (a, x, segment_size) and set(xis) <= set(cxis):
                return prof
    t0 = time.perf_counter()
    bp = base_primes_for(x)
    bounds = segment_bounds(x, segment_size)
    work = lambda lohi: process_segment(a, lohi[0], lohi[1], bp, xis)  # noqa: E731
    nthreads = resolve_threads(threads)
    if nthreads == 1 or len(bounds) == 1:
        segs = [work(b) for b in bounds]
    else:
        with ThreadPoolExecutor(max_workers=nthreads) as pool:
            segs = list(pool.map(work, bounds))  # map keeps segment order
    cat = lambda name: np.concatenate([getattr(s, name) for s in segs])  # noqa: E731
    prof = OrderProfile(
        a=a,
        x=x,
        p=cat("p"),
        index=cat("index"),
        omega=cat("omega"),
        big_omega=cat("big_omega"),
        omega_diff=cat("omega_diff"),
        omega_xi={xi: np.concatenate([s.omega_xi[xi] for s in segs]) for xi in xis},
        runtime_s=time.perf_counter() - t0,
    )
    if use_cache:
        if len(_PROFILE_CACHE) >= _PROFILE_CACHE_SIZE:
            _PROFILE_CACHE.pop(next(iter(_PROFILE_CACHE)))
        _PROFILE_CACHE[key] = prof
    return prof


def clear_profile_cache():
    _PROFILE_CACHE.clear()


# ---------------------------------------------------------------------------
# tallies


@dataclass
class EmpiricalTally:
    a: Fraction
    statistic: StatisticKind
    x: int
    xi: Optional[int]
    counts: dict
    primes_used: int
    runtime_s: float = 0.0

    def __post_init__(self):
        if sum(self.counts.values()) != self.primes_used:
            raise DomainError("tally counts do not add up to primes_used")

    def density(self, n: int) -> float:
        return self.counts.get(n, 0) / self.primes_used if self.primes_used else 0.0

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "a": str(self.a),
            "statistic": self.statistic.value,
            "x": self.x,
            "xi": self.xi,
            "counts": {str(k): int(v) for k, v in sorted(self.counts.items())},
            "primes_used": self.primes_used,
            "runtime_s": self.runtime_s,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "EmpiricalTally":
        if d.get("schema_version", SCHEMA_VERSION) != SCHEMA_VERSION:
            raise DomainError(f"unsupported tally schema {d.get('schema_version')}")
        return cls(
            a=as_fraction(d["a"]),
            statistic=StatisticKind.parse(d["statistic"]),
            x=int(d["x"]),
            xi=d.get("xi"),
            counts={int(k): int(v) for k, v in d["counts"].items()},
            primes_used=int(d["primes_used"]),
            runtime_s=float(d.get("runtime_s", 0.0)),
        )

    def save(self, path):
        Path(path).write_text(json.dumps(self.to_dict(), indent=1))

    @classmethod
    def load(cls, path) -> "EmpiricalTally":
        return cls.from_dict(json.loads(Path(path).read_text()))

    def merged(self, other: "EmpiricalTally") -> "EmpiricalTally":
        counts = dict(self.counts)
        for k, v in other.counts.items():
            counts[k] = counts.get(k, 0) + v
        return EmpiricalTally(
            self.a,
            self.statistic,
            max(self.x, other.x),
            self.xi,
            counts,
            self.primes_used + other.primes_used,
            self.runtime_s + other.runtime_s,
        )


def _counts(values: np.ndarray) -> dict:
    bc = np.bincount(values.astype(np.int64)) if len(values) else np.zeros(0, np.int64)
    return {n: int(c) for n, c in enumerate(bc.tolist()) if c}


def tally_from_profile(prof: OrderProfile, stat, xi: Optional[int] = None) -> EmpiricalTally:
    stat = StatisticKind.parse(stat)
    return EmpiricalTally(prof.a, stat, prof.x, xi, _counts(prof.values(stat, xi)), prof.primes_used, prof.runtime_s)


def _checkpointed_tally(a, stat, x, xi, segment_size, checkpoint_dir) -> EmpiricalTally:
    """Segment by segment, reusing any segment tally already on disk."""
    ck = Path(checkpoint_dir)
    ck.mkdir(parents=True, exist_ok=True)
    bp = base_primes_for(x)
    total = None
    tag = f"{str(a).replace('/', '_')}_{stat.value}_xi{xi}"
    for lo, hi in segment_bounds(x, segment_size):
        f = ck / f"{tag}_{lo}_{hi}.json"
        seg_tally = None
        if f.exists():
            try:
                d = json.loads(f.read_text())
                seg_tally = EmpiricalTally.from_dict(d)
            except (ValueError, KeyError):
                seg_tally = None
        if seg_tally is None:
            t0 = time.perf_counter()
            seg = process_segment(a, lo, hi, bp, (xi,) if xi else ())
            vals = seg.omega_xi[xi] if xi else {
                StatisticKind.OMEGA_QUOTIENT: seg.omega,
                StatisticKind.BIG_OMEGA_QUOTIENT: seg.big_omega,
                StatisticKind.OMEGA_DIFFERENCE: seg.omega_diff,
            }[stat]
            seg_tally = EmpiricalTally(a, stat, hi - 1, xi, _counts(vals), len(seg.p), time.perf_counter() - t0)
            tmp = f.with_suffix(".tmp")
            tmp.write_text(json.dumps(seg_tally.to_dict()))
            tmp.replace(f)
        total = seg_tally if total is None else total.merged(seg_tally)
    total.x = x
    return total


def empirical_densities(
    a,
    stat,
    x: int,
    max_n: int,
    xi: Optional[int] = None,
    threads: Optional[int] = None,
    segment_size: int = DEFAULT_SEGMENT,
    checkpoint_dir=None,
) -> tuple[EmpiricalTally, CoefficientTable]:
    """Tally the statistic over primes p <= x and convert to densities for n <= max_n.

    With ``xi`` set only prime factors <= xi of the index are counted; that
    truncation is defined for the omega-quotient statistic only.
    """
    _check_x(x)
    if max_n < 0:
        raise DomainError("max_n must be >= 0")
    stat, a = StatisticKind.parse(stat), as_fraction(a)
    if xi is not None:
        if stat is not StatisticKind.OMEGA_QUOTIENT:
            raise DomainError("the xi truncation is only defined for omega-quotient")
        if xi < 2:
            raise DomainError("xi must be >= 2")
    if checkpoint_dir is not None:
        tally = _checkpointed_tally(a, stat, x, xi, segment_size, checkpoint_dir)
    else:
        prof = order_profile(a, x, (xi,) if xi else (), threads, segment_size)
        tally = tally_from_profile(prof, stat, xi)
    return tally, tally_to_table(tally, max_n)


def tally_to_table(tally: EmpiricalTally, max_n: int) -> CoefficientTable:
    N = tally.primes_used
    vals = [tally.density(n) for n in range(max_n + 1)]
    errs = [math.sqrt(v * (1 - v) / N) if N else 0.0 for v in vals]
    return CoefficientTable(
        a=tally.a,
        statistic=tally.statistic,
        values=vals,
        errors=errs,
        source="empirical",
        primes_used=N,
        x=tally.x,
        xi=tally.xi,
    )


# ---------------------------------------------------------------------------
# splitting counts


def splitting_count(a, ell: int, m: int, x: int, threads: Optional[int] = None) -> int:
    """#{p <= x : nu_p(a) = 0, ell | (p-1)/ord_p(a), m*ell | p-1}."""
    if ell < 1 or m < 1:
        raise DomainError("ell and m must be >= 1")
    prof = order_profile(a, x, threads=threads)
    return int(np.count_nonzero((prof.index % ell == 0) & ((prof.p - 1) % (m * ell) == 0)))


def primes_in_universe(a, x: int, threads: Optional[int] = None) -> int:
    return order_profile(a, x, threads=threads).primes_used


# ---------------------------------------------------------------------------
# comparison


@dataclass
class ComparisonRow:
    n: int
    predicted: float
    empirical: float
    diff: float
    predicted_error: float
    sigma: float
    threshold: float
    passed: bool


@dataclass
class ComparisonReport:
    a: Optional[Fraction]
    statistic: StatisticKind
    rows: list = field(default_factory=list)
    sigmas: float = 4.0
    slack: float = 0.01

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.rows)

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "a": None if self.a is None else str(self.a),
            "statistic": self.statistic.value,
            "sigmas": self.sigmas,
            "slack": self.slack,
            "passed": self.passed,
            "rows": [r.__dict__.copy() for r in self.rows],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ComparisonReport":
        return cls(
            a=None if d.get("a") is None else as_fraction(d["a"]),
            statistic=StatisticKind.parse(d["statistic"]),
            rows=[ComparisonRow(**r) for r in d["rows"]],
            sigmas=d["sigmas"],
            slack=d["slack"],
        )


def compare(predicted: CoefficientTable, empirical: CoefficientTable, sigmas: float = 4.0, slack: float = 0.01) -> ComparisonReport:
    """Per-n agreement test: |diff| <= sigmas * binomial sigma + slack + predicted error.

    The slack absorbs the slowly decaying finite-x error of the asymptotic
    densities.
    """
    if predicted.a != empirical.a or predicted.statistic != empirical.statistic:
        raise MismatchError(
            f"cannot compare a={predicted.a}/{predicted.statistic} with a={empirical.a}/{empirical.statistic}"
        )
    N = empirical.primes_used or predicted.primes_used
    report = ComparisonReport(predicted.a, predicted.statistic, sigmas=sigmas, slack=slack)
    for n in range(min(len(predicted), len(empirical))):
        d, e = predicted.values[n], empirical.values[n]
        pe = predicted.errors[n] if predicted.source != "empirical" else 0.0
        dd = min(max(d, 0.0), 1.0)
        sigma = math.sqrt(dd * (1 - dd) / N) if N else 0.0
        thr = sigmas * sigma + slack + pe
        diff = e - d
        report.rows.append(ComparisonRow(n, d, e, diff, pe, sigma, thr, abs(diff) <= thr))
    return report
