"""The nine acceptance criteria, one test each.

Each criterion is a function returning (ok, detail); the pytest wrappers
record the outcome and conftest prints one PASS/FAIL line per criterion at
the end of the run.  ``python3 tests/test_acceptance.py`` runs them directly.
"""
from __future__ import annotations

import math
import sys
import time
from fractions import Fraction
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).parent))

from artinstat.arith import _int_val, decompose, discriminant, factorint
from artinstat.coeffs import (
    PrimeCutoff,
    artin_inclusion_exclusion,
    bell_coefficients,
    corrected_coefficients,
    decay_constant,
    expectation,
    predict,
    uncorrected_coefficients,
)
from artinstat.empirical import compare, empirical_densities, order_profile
from artinstat.genfun import RationalFunction, StatisticKind, Z, classical_artin_factor, correction_factors, evaluate
from artinstat.kummer import DegreeQuery, degree, epsilon

OQ, BO, OD = StatisticKind.OMEGA_QUOTIENT, StatisticKind.BIG_OMEGA_QUOTIENT, StatisticKind.OMEGA_DIFFERENCE
STATS = (OQ, BO, OD)
RESULTS: dict[int, tuple[bool, str]] = {}

TITLES = {
    1: "closed-form prefactors exact",
    2: "reference tables to 2e-5",
    3: "normalisation F(1)=H(1)=1, sum D_a(n) ~ 1",
    4: "Artin constant chain",
    5: "recursion vs Bell partition sum",
    6: "4^-n decay toward R_a",
    7: "empirical agreement at x=1e7",
    8: "degree vs splitting counts at x=1e7",
    9: "expectations",
}

# ---------------------------------------------------------------------------
# 1


PREFACTORS = {
    (3, OQ): RationalFunction.const(1),
    (4, OQ): 2 * Z / (Z + 1),
    (5, OQ): (2 * Z**2 + 18 * Z + 20) / (Z**2 + 20 * Z + 19),
    (3, BO): (3 * Z**3 - 4 * Z**2 + 37 * Z + 60) / (2 * Z**2 + 34 * Z + 60),
    (4, BO): (Z**3 - Z**2 + 12 * Z) / (4 * Z + 8),
    (5, BO): (11 * Z**2 + 77 * Z + 200) / (Z**2 + 97 * Z + 190),
    (3, OD): (Z**2 + 20 * Z + 27) / (2 * Z**2 + 18 * Z + 28),
    (4, OD): (7 * Z + 5) / (4 * (Z + 2)),
    (5, OD): (2 * Z**2 + 23 * Z + 47) / (Z**2 + 25 * Z + 46),
}


def criterion_1():
    t0 = time.perf_counter()
    bad = [k for k, target in PREFACTORS.items() if correction_factors(*k).combined != target]
    dt = time.perf_counter() - t0
    return not bad and dt < 1.0, f"{9 - len(bad)}/9 exact, {dt:.3f}s"


# ---------------------------------------------------------------------------
# 2 and 9: the tabulated values, n = 0..5 then the expectation

REFERENCE = {
    None: {
        BO: [0.373955, 0.387002, 0.167049, 0.052465, 0.014466, 0.003774, 0.96337],
        OQ: [0.373955, 0.489828, 0.125687, 0.010164, 0.000356, 0.000006, 0.77315],
        OD: [0.530711, 0.391986, 0.072349, 0.004800, 0.000147, 0.000002, 0.55169],
    },
    3: {
        BO: [0.373955, 0.405700, 0.138409, 0.056421, 0.018447, 0.005215, 0.96337],
        OQ: [0.373955, 0.489828, 0.125687, 0.010164, 0.000356, 0.000006, 0.77315],
        OD: [0.511757, 0.428079, 0.056962, 0.003112, 0.000085, 0.000001, 0.55169],
    },
    4: {
        BO: [0, 0.560933, 0.253293, 0.122297, 0.045042, 0.013501, 1.71337],
        OQ: [0, 0.747911, 0.231746, 0.019629, 0.000700, 0.000012, 1.27315],
        OD: [0.331694, 0.543517, 0.116448, 0.008083, 0.000252, 0.000004, 0.80169],
    },
    5: {
        BO: [0.393637, 0.357959, 0.169510, 0.056907, 0.016216, 0.004294, 0.96337],
        OQ: [0.393637, 0.455527, 0.135494, 0.014732, 0.000596, 0.000011, 0.77315],
        OD: [0.542249, 0.371163, 0.079483, 0.006858, 0.000241, 0.000004, 0.55169],
    },
}
REF_TOL = 2e-5


def criterion_2():
    t0 = time.perf_counter()
    worst, n_checked, n_exp, fails = 0.0, 0, 0, []
    for a, per_stat in REFERENCE.items():
        for stat, ref in per_stat.items():
            t = predict(a, stat, 5, PrimeCutoff())
            for n in range(6):
                d = abs(t.values[n] - ref[n])
                worst = max(worst, d)
                n_checked += 1
                if d > REF_TOL:
                    fails.append((a, stat.value, n))
            d = abs(t.expectation[0] - ref[6])
            worst = max(worst, d)
            n_exp += 1
            if d > REF_TOL:
                fails.append((a, stat.value, "E"))
    dt = time.perf_counter() - t0
    ok = not fails and dt < 120
    return ok, f"{n_checked} values + {n_exp} expectations, max |diff| {worst:.2e}, {dt:.1f}s" + (f", failing {fails}" if fails else "")


# ---------------------------------------------------------------------------
# 3

NORM_BASES = [2, -2, 3, 4, 5, 8, -8, 9, 12]


def criterion_3():
    worst, bad = 0.0, []
    for a in NORM_BASES:
        for stat in STATS:
            cf = correction_factors(a, stat)
            if evaluate(cf.F, 1) != 1 or evaluate(cf.H, 1) != 1:
                bad.append((a, stat.value, "F(1) or H(1)"))
            s = math.fsum(corrected_coefficients(a, stat, 12).values)
            worst = max(worst, abs(s - 1))
            if abs(s - 1) >= 1e-3:
                bad.append((a, stat.value, s))
    return not bad, f"{len(NORM_BASES) * 3} (a, statistic) pairs, max |sum - 1| {worst:.1e}" + (f", failing {bad}" if bad else "")


# ---------------------------------------------------------------------------
# 4


def _artin_form(a) -> Fraction:
    """F_a H_a written out from the classical density, independent of genfun."""
    base = decompose(a)
    h = base.h
    hh = h // 2 if (base.sign < 0 and h % 2 == 0) else h
    H = Fraction(1)
    for q in factorint(hh):
        H *= Fraction(q * (q - 2), q * q - q - 1)
    d = discriminant(a)
    F = Fraction(1)
    if d % 4 == 1:
        prod = Fraction(1)
        for q in factorint(abs(d)):
            prod *= Fraction(-1, q * q - q - 1) if h % q else Fraction(-1, q - 2)
        F = 1 - prod
    return F * H


def criterion_4():
    notes, ok = [], True
    d0 = uncorrected_coefficients(OQ, 0).values[0]
    for a in (2, 3, 5, -3, 4, 12, -8, 9):
        lhs = float(evaluate(correction_factors(a, OQ).combined, 0)) * d0
        rhs = float(_artin_form(a)) * d0
        if abs(lhs - rhs) > 1e-15 or classical_artin_factor(a) != _artin_form(a):
            ok = False
            notes.append(f"a={a} chain mismatch")
    for a in (2, 3, 5):
        da0 = corrected_coefficients(a, OQ, 0).values[0]
        ie = artin_inclusion_exclusion(a, 10**4)
        notes.append(f"a={a}: D_a(0)={da0:.6f} incl-excl={ie:.6f}")
        if abs(ie - da0) >= 1e-3:
            ok = False
    return ok, "; ".join(notes)


# ---------------------------------------------------------------------------
# 5


def criterion_5():
    worst = 0.0
    for cutoff in (PrimeCutoff.uniform(10**5), PrimeCutoff()):
        for stat in STATS:
            r = uncorrected_coefficients(stat, 8, cutoff).values
            b = bell_coefficients(stat, 8, cutoff).values
            worst = max(worst, max(abs(x - y) for x, y in zip(r, b)))
    return worst < 1e-12, f"max |recursive - Bell| over n<=8, 3 statistics, 2 cutoffs: {worst:.1e}"


# ---------------------------------------------------------------------------
# 6


def criterion_6():
    ok, notes = True, []
    for a in (2, 3):
        R = decay_constant(a)
        t = corrected_coefficients(a, BO, 12)
        rel = [t.values[n] * 4**n / R - 1 for n in range(8, 13)]
        ratio = t.values[11] / t.values[10]
        ok &= all(abs(r) < 0.05 for r in rel) and abs(ratio / 0.25 - 1) < 0.10
        # convergence toward R: the relative gap shrinks
        ok &= all(abs(rel[k + 1]) <= abs(rel[k]) for k in range(4))
        notes.append(f"a={a}: R={R:.6f}, D4^n/R-1 from {rel[0]:+.1e} to {rel[-1]:+.1e}, ratio(10)={ratio:.5f}")
    return ok, "; ".join(notes)


# ---------------------------------------------------------------------------
# 7


def criterion_7(x=10**7):
    t0 = time.perf_counter()
    worst, bad = 0.0, []
    for a in (2, 3, 5):
        for stat in STATS:
            _, emp = empirical_densities(a, stat, x, 3)
            rep = compare(predict(a, stat, 3), emp, sigmas=4.0, slack=0.01)
            for row in rep.rows:
                worst = max(worst, abs(row.diff))
                if not row.passed:
                    bad.append((a, stat.value, row.n, row.diff))
    dt = time.perf_counter() - t0
    return not bad, f"9 runs x 4 densities, max |diff| {worst:.4f}, {dt:.1f}s on 1 thread" + (f", failing {bad}" if bad else "")


# ---------------------------------------------------------------------------
# 8


def _branch(q: DegreeQuery) -> str:
    b, ell, m = q.base, q.ell, q.m
    v_ell = _int_val(ell, 2)
    v_lp = _int_val(q.ell_prime, 2)
    e = epsilon(q)
    if b.sign > 0:
        return f"a>0 eps={e}"
    if v_ell == 0:
        return "a<0 l odd"
    if v_lp == 0:
        return f"a<0 l' odd, m {'even' if m % 2 == 0 else 'odd'}"
    if v_lp == 1:
        if m % 2 == 0:
            return f"a<0 l'=2 mod 4, m even, eps={e}"
        return f"a<0 l'=2 mod 4, m odd, nu2(l)={min(v_ell, 3)}, eps={e}"
    return f"a<0 4|l', eps={e}"


def criterion_8(x=10**7):
    t0 = time.perf_counter()
    n_checks, bad, branches, worst = 0, [], set(), 0.0
    for a in (2, 3, 5, -2, -4, 8, 12):
        prof = order_profile(a, x)
        pm1 = prof.p - 1
        small_p = prof.p[prof.p <= 60]
        base = decompose(a)
        for L in range(1, 61):
            for ell in (d for d in range(1, L + 1) if L % d == 0):
                m = L // ell
                q = DegreeQuery(base, ell, m)
                branches.add(_branch(q))
                count = int(np.count_nonzero((pm1 % L == 0) & (prof.index % ell == 0)))
                # reference population: primes of the universe not dividing m*ell
                N = prof.primes_used - int(np.count_nonzero(L % small_p == 0))
                dens = 1 / degree(base, ell, m)
                sigma = math.sqrt(N * dens * (1 - dens))
                dev = abs(count - N * dens)
                n_checks += 1
                if sigma:
                    worst = max(worst, dev / sigma)
                if dev > 3 * sigma:
                    bad.append((a, ell, m, count, round(N * dens, 1)))
    dt = time.perf_counter() - t0
    detail = f"{n_checks} (a, l, m) triples, {len(branches)} eps-branches, worst {worst:.2f} sigma, {dt:.1f}s"
    return not bad, detail + (f", outside 3 sigma: {bad}" if bad else "")


# ---------------------------------------------------------------------------
# 9


def criterion_9():
    fails, worst_fig, worst_id = [], 0.0, 0.0
    for a in (None, 4):
        for stat in STATS:
            ref = REFERENCE[a][stat][6]
            E = predict(a, stat, 0).expectation[0]
            worst_fig = max(worst_fig, abs(E - ref))
            if abs(E - ref) > REF_TOL:
                fails.append((a, stat.value))
    for a in (2, 3, 4, 5, -2, 12):
        for stat in STATS:
            E, err = expectation(a, stat)
            t = corrected_coefficients(a, stat, 60)
            moment = math.fsum(n * v for n, v in enumerate(t.values))
            bound = err + math.fsum(n * e for n, e in enumerate(t.errors))
            worst_id = max(worst_id, abs(moment - E))
            if abs(moment - E) > bound:
                fails.append((a, stat.value, "moment"))
    return not fails, f"reference rows max |diff| {worst_fig:.1e}; |E - sum n D(n)| max {worst_id:.1e}" + (f", failing {fails}" if fails else "")


CRITERIA = {
    1: criterion_1,
    2: criterion_2,
    3: criterion_3,
    4: criterion_4,
    5: criterion_5,
    6: criterion_6,
    7: criterion_7,
    8: criterion_8,
    9: criterion_9,
}


def _run(k):
    ok, detail = CRITERIA[k]()
    RESULTS[k] = (bool(ok), detail)
    return ok, detail


def format_line(k) -> str:
    ok, detail = RESULTS[k]
    return f"criterion {k} [{'PASS' if ok else 'FAIL'}] {TITLES[k]}: {detail}"


def test_criterion_1_closed_form_prefactors():
    ok, detail = _run(1)
    assert ok, detail


def test_criterion_2_reference_tables():
    ok, detail = _run(2)
    assert ok, detail


def test_criterion_3_normalisation():
    ok, detail = _run(3)
    assert ok, detail


def test_criterion_4_artin_chain():
    ok, detail = _run(4)
    assert ok, detail


def test_criterion_5_bell_oracle():
    ok, detail = _run(5)
    assert ok, detail


def test_criterion_6_decay():
    ok, detail = _run(6)
    assert ok, detail


def test_criterion_7_empirical_agreement():
    ok, detail = _run(7)
    assert ok, detail


def test_criterion_8_splitting_counts():
    ok, detail = _run(8)
    assert ok, detail


def test_criterion_9_expectations():
    ok, detail = _run(9)
    assert ok, detail


if __name__ == "__main__":
    for k in CRITERIA:
        _run(k)
        print(format_line(k), flush=True)
    sys.exit(0 if all(ok for ok, _ in RESULTS.values()) else 1)
